#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace ranlab {

// Shortest round-trip decimal representation, the backbone of the
// byte-stable output guarantee.
inline std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// Row-oriented CSV accumulator with a fixed header.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header)
      : header_(std::move(header)) {
    for (std::size_t i = 0; i < header_.size(); ++i) {
      if (i) body_ += ',';
      body_ += header_[i];
    }
    body_ += '\n';
  }

  class Row {
   public:
    explicit Row(CsvWriter& w) : w_(w) {}
    Row& add(double v) { return add_raw(format_double(v)); }
    Row& add(int v) { return add_raw(std::to_string(v)); }
    Row& add(long v) { return add_raw(std::to_string(v)); }
    Row& add(std::uint64_t v) { return add_raw(std::to_string(v)); }
    Row& add(const std::string& v) { return add_raw(v); }
    Row& add(const char* v) { return add_raw(v); }
    ~Row() { w_.body_ += '\n'; }

   private:
    Row& add_raw(const std::string& s) {
      if (count_++) w_.body_ += ',';
      w_.body_ += s;
      return *this;
    }
    CsvWriter& w_;
    std::size_t count_ = 0;
  };

  Row row() { return Row(*this); }

  const std::string& str() const { return body_; }

  void save(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << body_;
  }

 private:
  std::vector<std::string> header_;
  std::string body_;
  friend class Row;
};

}  // namespace ranlab
