#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace fixtures {

namespace fs = std::filesystem;

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::mt19937_64 rng(std::random_device{}());
    path_ = fs::temp_directory_path() / ("paragraph-" + tag + "-" + std::to_string(rng()));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

inline void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Relative path -> file contents, for whole-tree comparisons.
inline std::map<std::string, std::string> snapshot(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (entry.is_regular_file()) files[fs::relative(entry.path(), root).string()] = read_text(entry.path());
  }
  return files;
}

inline std::string qqp_header() { return "id\tqid1\tqid2\tquestion1\tquestion2\tis_duplicate\n"; }

inline std::string qqp_rows(const std::vector<std::tuple<std::string, std::string, int>>& rows) {
  std::string out = qqp_header();
  int id = 0;
  for (const auto& [a, b, label] : rows) {
    out += std::to_string(id) + "\t\t\t" + a + "\t" + b + "\t" + std::to_string(label) + "\n";
    ++id;
  }
  return out;
}

// QQP-shaped corpus with clustered questions: each question belongs to one of
// a few latent topics, duplicates are mostly drawn within a topic and a small
// fraction of duplicate labels is dropped to seed conflicts.
inline std::string synthetic_qqp(std::uint64_t seed, std::size_t rows, std::size_t questions,
                                 std::size_t topics) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, questions - 1);
  std::bernoulli_distribution same_topic(0.45);
  std::bernoulli_distribution noise(0.05);
  std::ostringstream out;
  out << qqp_header();
  for (std::size_t i = 0; i < rows; ++i) {
    std::size_t a = pick(rng);
    std::size_t b = pick(rng);
    if (same_topic(rng)) b = (b / topics) * topics + a % topics;
    if (a == b) continue;
    int label = (a % topics == b % topics) ? 1 : 0;
    if (label == 1 && noise(rng)) label = 0;
    out << i << '\t' << a << '\t' << b << '\t' << "How do I solve problem " << a << " quickly?" << '\t'
        << "How do I solve problem " << b << " quickly?" << '\t' << label << '\n';
  }
  return out.str();
}

}  // namespace fixtures
