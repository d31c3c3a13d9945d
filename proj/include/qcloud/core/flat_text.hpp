#pragma once

// Line-oriented "key value..." text used for checkpoints. Each non-comment
// line is a key followed by whitespace-separated tokens; numeric arrays are
// written as `key <count> v0 v1 ...` with 17 significant digits so doubles
// round-trip exactly.

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace qcloud {

class FlatTextWriter {
  public:
    explicit FlatTextWriter(std::ostream &os) : os_(os) {}

    void comment(const std::string &text);
    void value(const std::string &key, const std::string &v);
    void value(const std::string &key, long long v);
    void array(const std::string &key, const Eigen::VectorXd &values);

  private:
    std::ostream &os_;
};

class FlatTextReader {
  public:
    /// Throws ParseError on malformed lines or duplicate keys.
    explicit FlatTextReader(std::istream &is);

    [[nodiscard]] bool has(const std::string &key) const;
    [[nodiscard]] const std::string &string(const std::string &key) const;
    [[nodiscard]] long long integer(const std::string &key) const;
    /// Checks the declared count against the number of values.
    [[nodiscard]] Eigen::VectorXd array(const std::string &key) const;
    [[nodiscard]] std::vector<std::string> keys() const;

  private:
    struct Entry {
        std::string key;
        std::vector<std::string> tokens;
        int line;
    };
    const Entry &find(const std::string &key) const;
    std::vector<Entry> entries_;
};

/// printf("%.17g")
[[nodiscard]] std::string format_double(double v);

} // namespace qcloud
