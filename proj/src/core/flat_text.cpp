#include "qcloud/core/flat_text.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "qcloud/core/error.hpp"

namespace qcloud {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void FlatTextWriter::comment(const std::string &text) { os_ << "# " << text << '\n'; }

void FlatTextWriter::value(const std::string &key, const std::string &v) {
    os_ << key << ' ' << v << '\n';
}

void FlatTextWriter::value(const std::string &key, long long v) { os_ << key << ' ' << v << '\n'; }

void FlatTextWriter::array(const std::string &key, const Eigen::VectorXd &values) {
    os_ << key << ' ' << values.size();
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        os_ << ' ' << format_double(values(i));
    }
    os_ << '\n';
}

FlatTextReader::FlatTextReader(std::istream &is) {
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') {
            continue;
        }
        std::istringstream ss(line);
        Entry e{{}, {}, line_no};
        ss >> e.key;
        std::string tok;
        while (ss >> tok) {
            e.tokens.push_back(tok);
        }
        if (e.tokens.empty()) {
            throw ParseError("key '" + e.key + "' has no value", line_no);
        }
        if (has(e.key)) {
            throw ParseError("duplicate key '" + e.key + "'", line_no);
        }
        entries_.push_back(std::move(e));
    }
}

bool FlatTextReader::has(const std::string &key) const {
    for (const auto &e : entries_) {
        if (e.key == key) {
            return true;
        }
    }
    return false;
}

const FlatTextReader::Entry &FlatTextReader::find(const std::string &key) const {
    for (const auto &e : entries_) {
        if (e.key == key) {
            return e;
        }
    }
    throw ParseError("missing key '" + key + "'", 0);
}

const std::string &FlatTextReader::string(const std::string &key) const {
    return find(key).tokens.front();
}

long long FlatTextReader::integer(const std::string &key) const {
    const auto &e = find(key);
    const auto &tok = e.tokens.front();
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
        throw ParseError("key '" + key + "': expected integer, got '" + tok + "'", e.line);
    }
    return v;
}

Eigen::VectorXd FlatTextReader::array(const std::string &key) const {
    const auto &e = find(key);
    const long long count = integer(key);
    if (count < 0 || static_cast<std::size_t>(count) + 1 != e.tokens.size()) {
        throw ParseError("key '" + key + "': declared " + std::to_string(count) + " values, found " +
                             std::to_string(e.tokens.size() - 1),
                         e.line);
    }
    Eigen::VectorXd out(count);
    for (long long i = 0; i < count; ++i) {
        const auto &tok = e.tokens[static_cast<std::size_t>(i + 1)];
        try {
            std::size_t used = 0;
            out(i) = std::stod(tok, &used);
            if (used != tok.size()) {
                throw std::invalid_argument(tok);
            }
        } catch (const std::exception &) {
            throw ParseError("key '" + key + "': bad number '" + tok + "'", e.line);
        }
    }
    return out;
}

std::vector<std::string> FlatTextReader::keys() const {
    std::vector<std::string> out;
    for (const auto &e : entries_) {
        out.push_back(e.key);
    }
    return out;
}

} // namespace qcloud
