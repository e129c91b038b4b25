// io.hpp — deterministic CSV/JSON emission and the input content hash.
//
// CSV: header row, '.' decimal separator, 17 significant digits.  JSON
// summaries echo the effective configuration and a git-style (SHA-1 blob)
// hash of its canonical serialization, so identical config+seed reruns are
// byte-identical.

#pragma once

#include <string>
#include <vector>

namespace mgtf {

// value -> text with 17 significant digits ("%.17g")
std::string csv_number(double x);

class CsvWriter {
  public:
    explicit CsvWriter(std::vector<std::string> columns);

    void add_row(const std::vector<std::string>& cells);
    void add_row(const std::vector<double>& values);
    const std::string& text() const { return text_; }
    void write(const std::string& path) const;

  private:
    std::size_t n_cols_;
    std::string text_;
};

// SHA-1 of the git blob encoding "blob <len>\0<content>", lowercase hex.
std::string git_blob_sha1(const std::string& content);

// Creates the directory (and parents) if needed; throws std::runtime_error
// naming the path on failure.
void ensure_directory(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace mgtf
