#include <fstream>
#include <set>
#include <sstream>

#include "twist/parser.hpp"
#include "twist/resolve.hpp"

namespace twist {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CompileError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Loader {
 public:
  explicit Loader(std::span<const fs::path> include_dirs)
      : include_dirs_(include_dirs) {}

  void load_file(const fs::path& file) {
    std::error_code ec;
    fs::path canonical = fs::weakly_canonical(file, ec);
    if (ec || !fs::is_regular_file(canonical)) {
      throw CompileError("cannot read " + file.string());
    }
    enter(canonical, read_file(canonical), file.string(),
          canonical.parent_path());
  }

  void load_text(std::string_view source, const std::string& name,
                 const fs::path& base_dir) {
    enter({}, std::string(source), name, base_dir);
  }

  std::vector<SurfaceModule> take() { return std::move(done_); }

 private:
  void enter(const fs::path& key, const std::string& source,
             const std::string& shown, const fs::path& dir) {
    SurfaceModule module = parse_source(source, shown);
    if (!key.empty()) active_.insert(key);
    for (const Import& imp : module.imports) {
      fs::path found = locate(imp, dir, shown);
      if (active_.count(found)) {
        throw CompileError("import cycle through " + imp.path, imp.pos, shown);
      }
      if (loaded_.count(found)) continue;
      enter(found, read_file(found), found.string(), found.parent_path());
    }
    if (!key.empty()) {
      active_.erase(key);
      loaded_.insert(key);
    }
    done_.push_back(std::move(module));
  }

  fs::path locate(const Import& imp, const fs::path& dir,
                  const std::string& importer) const {
    std::vector<fs::path> candidates;
    candidates.push_back(dir / imp.path);
    for (const fs::path& inc : include_dirs_) candidates.push_back(inc / imp.path);
    for (const fs::path& c : candidates) {
      std::error_code ec;
      if (fs::is_regular_file(c, ec)) return fs::weakly_canonical(c);
    }
    throw CompileError("cannot find import " + imp.path, imp.pos, importer);
  }

  std::span<const fs::path> include_dirs_;
  std::set<fs::path> active_;
  std::set<fs::path> loaded_;
  std::vector<SurfaceModule> done_;
};

}  // namespace

std::vector<SurfaceModule> load_modules(const fs::path& file,
                                        std::span<const fs::path> include_dirs) {
  Loader loader(include_dirs);
  loader.load_file(file);
  return loader.take();
}

std::vector<SurfaceModule> load_source(std::string_view source,
                                       const std::string& name,
                                       const fs::path& base_dir,
                                       std::span<const fs::path> include_dirs) {
  Loader loader(include_dirs);
  loader.load_text(source, name, base_dir);
  return loader.take();
}

}  // namespace twist
