#include "qcloud/workload/qasm.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>

#include "qcloud/core/error.hpp"

namespace qcloud::workload {

namespace {

struct Statement {
    std::string text;
    int line = 0;
};

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

/// Splits on ';' after dropping // comments. A statement's line is the line
/// of its first non-blank character.
std::vector<Statement> statements(std::string_view text) {
    std::vector<Statement> out;
    std::string cur;
    int line = 1;
    int start_line = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
            while (i < text.size() && text[i] != '\n') {
                ++i;
            }
            if (i < text.size()) {
                ++line;
                cur += ' ';
            }
            continue;
        }
        if (c == '\n') {
            ++line;
            cur += ' ';
            continue;
        }
        if (c == ';') {
            out.push_back({std::string(trim(cur)), start_line});
            cur.clear();
            start_line = 0;
            continue;
        }
        if (start_line == 0 && !std::isspace(static_cast<unsigned char>(c))) {
            start_line = line;
        }
        cur += c;
    }
    if (!trim(cur).empty()) {
        throw ParseError("statement not terminated by ';'", start_line);
    }
    return out;
}

bool is_ident(std::string_view s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) {
        return false;
    }
    return std::all_of(s.begin(), s.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    });
}

/// expr := ['-'] factor (('*' | '/') factor)*, factor := number | pi
class AngleParser {
  public:
    AngleParser(std::string_view s, int line) : s_(s), line_(line) {}

    double parse() {
        skip();
        double sign = 1.0;
        if (peek() == '-') {
            sign = -1.0;
            ++pos_;
        }
        double v = factor();
        for (;;) {
            skip();
            const char op = peek();
            if (op != '*' && op != '/') {
                break;
            }
            ++pos_;
            const double rhs = factor();
            if (op == '/' && rhs == 0.0) {
                throw ParseError("division by zero in angle", line_);
            }
            v = op == '*' ? v * rhs : v / rhs;
        }
        skip();
        if (pos_ != s_.size()) {
            throw ParseError("unsupported angle expression '" + std::string(s_) + "'", line_);
        }
        return sign * v;
    }

  private:
    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) {
            ++pos_;
        }
    }
    double factor() {
        skip();
        if (s_.substr(pos_, 2) == "pi") {
            pos_ += 2;
            return std::numbers::pi;
        }
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
        if (ec != std::errc()) {
            throw ParseError("unsupported angle expression '" + std::string(s_) + "'", line_);
        }
        pos_ = static_cast<std::size_t>(ptr - s_.data());
        return v;
    }

    std::string_view s_;
    std::size_t pos_ = 0;
    int line_;
};

struct Register {
    int offset = 0;
    int size = 0;
};

class Parser {
  public:
    QasmCircuitSummary run(std::string_view text) {
        const auto stmts = statements(text);
        if (stmts.empty()) {
            throw ParseError("missing 'OPENQASM 2.0' header", 1);
        }
        for (std::size_t i = 0; i < stmts.size(); ++i) {
            const auto &st = stmts[i];
            if (i == 0) {
                header(st);
            } else {
                statement(st);
            }
        }
        out_.n_qubits = n_qubits_;
        out_.depth = layer_.empty() ? 0 : *std::max_element(layer_.begin(), layer_.end());
        return out_;
    }

  private:
    static void header(const Statement &st) {
        std::string collapsed;
        for (char c : st.text) {
            if (!std::isspace(static_cast<unsigned char>(c))) {
                collapsed += c;
            }
        }
        if (collapsed != "OPENQASM2.0") {
            throw ParseError("missing 'OPENQASM 2.0' header", st.line);
        }
    }

    void statement(const Statement &st) {
        std::string_view s = st.text;
        if (s.empty()) {
            return;
        }
        // Keyword is the leading identifier; a '(' may follow without a space.
        std::size_t k = 0;
        while (k < s.size() && (std::isalnum(static_cast<unsigned char>(s[k])) || s[k] == '_')) {
            ++k;
        }
        const std::string kw(s.substr(0, k));
        std::string_view rest = trim(s.substr(k));

        if (kw == "include") {
            out_.warnings.push_back("line " + std::to_string(st.line) + ": include ignored");
        } else if (kw == "qreg" || kw == "creg") {
            declare(kw == "qreg" ? qregs_ : cregs_, rest, st.line, kw == "qreg");
        } else if (kw == "measure") {
            measure(rest, st.line);
        } else if (kw == "barrier") {
            barrier(rest, st.line);
        } else {
            gate(kw, rest, st.line);
        }
    }

    void declare(std::map<std::string, Register, std::less<>> &regs, std::string_view decl, int line,
                 bool quantum) {
        const auto lb = decl.find('[');
        const auto rb = decl.find(']');
        if (lb == std::string_view::npos || rb == std::string_view::npos || rb < lb ||
            !trim(decl.substr(rb + 1)).empty()) {
            throw ParseError("malformed register declaration", line);
        }
        const std::string name(trim(decl.substr(0, lb)));
        if (!is_ident(name)) {
            throw ParseError("bad register name '" + name + "'", line);
        }
        if (qregs_.contains(name) || cregs_.contains(name)) {
            throw ParseError("register '" + name + "' redeclared", line);
        }
        const int size = integer(trim(decl.substr(lb + 1, rb - lb - 1)), line);
        if (size < 1) {
            throw ParseError("register '" + name + "' must have size >= 1", line);
        }
        if (quantum) {
            regs[name] = {n_qubits_, size};
            n_qubits_ += size;
            layer_.resize(static_cast<std::size_t>(n_qubits_), 0);
        } else {
            regs[name] = {0, size};
        }
    }

    static int integer(std::string_view s, int line) {
        int v = 0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size()) {
            throw ParseError("bad integer '" + std::string(s) + "'", line);
        }
        return v;
    }

    /// Resolves `name` or `name[i]` to absolute indices.
    static std::vector<int> operand(const std::map<std::string, Register, std::less<>> &regs,
                                    std::string_view arg, int line, const char *kind) {
        arg = trim(arg);
        std::string_view name = arg;
        std::optional<int> index;
        if (const auto lb = arg.find('['); lb != std::string_view::npos) {
            const auto rb = arg.find(']');
            if (rb == std::string_view::npos || rb != arg.size() - 1) {
                throw ParseError("malformed operand '" + std::string(arg) + "'", line);
            }
            name = trim(arg.substr(0, lb));
            index = integer(trim(arg.substr(lb + 1, rb - lb - 1)), line);
        }
        const auto it = regs.find(name);
        if (it == regs.end()) {
            throw ParseError(std::string("undeclared ") + kind + " register '" + std::string(name) + "'",
                             line);
        }
        const Register &r = it->second;
        if (index) {
            if (*index < 0 || *index >= r.size) {
                throw ParseError("index " + std::to_string(*index) + " out of range for '" +
                                     std::string(name) + "[" + std::to_string(r.size) + "]'",
                                 line);
            }
            return {r.offset + *index};
        }
        std::vector<int> all(static_cast<std::size_t>(r.size));
        for (int i = 0; i < r.size; ++i) {
            all[static_cast<std::size_t>(i)] = r.offset + i;
        }
        return all;
    }

    static std::vector<std::string_view> args(std::string_view s) {
        std::vector<std::string_view> out;
        std::size_t start = 0;
        for (;;) {
            const auto comma = s.find(',', start);
            out.push_back(trim(s.substr(start, comma - start)));
            if (comma == std::string_view::npos) {
                return out;
            }
            start = comma + 1;
        }
    }

    void gate(const std::string &name, std::string_view rest, int line) {
        static const std::map<std::string, std::pair<int, bool>, std::less<>> kGates = {
            {"h", {1, false}},  {"x", {1, false}},  {"rx", {1, true}},  {"ry", {1, true}},
            {"rz", {1, true}},  {"cz", {2, false}}, {"cx", {2, false}}, {"swap", {2, false}},
        };
        const auto g = kGates.find(name);
        if (g == kGates.end()) {
            throw ParseError("unsupported statement '" + name + "'", line);
        }
        const auto [arity, has_angle] = g->second;
        if (has_angle) {
            if (rest.empty() || rest.front() != '(') {
                throw ParseError(name + " requires one angle", line);
            }
            const auto close = rest.find(')');
            if (close == std::string_view::npos) {
                throw ParseError("unclosed '(' in " + name, line);
            }
            (void)AngleParser(rest.substr(1, close - 1), line).parse();
            rest = trim(rest.substr(close + 1));
        } else if (!rest.empty() && rest.front() == '(') {
            throw ParseError(name + " takes no angle", line);
        }
        const auto a = args(rest);
        if (static_cast<int>(a.size()) != arity || a.front().empty()) {
            throw ParseError(name + " expects " + std::to_string(arity) + " operand(s)", line);
        }
        if (arity == 1) {
            for (int q : operand(qregs_, a[0], line, "quantum")) {
                place({q});
            }
            return;
        }
        const auto lhs = operand(qregs_, a[0], line, "quantum");
        const auto rhs = operand(qregs_, a[1], line, "quantum");
        if (lhs.size() > 1 && rhs.size() > 1 && lhs.size() != rhs.size()) {
            throw ParseError("register size mismatch in " + name, line);
        }
        const std::size_t n = std::max(lhs.size(), rhs.size());
        for (std::size_t i = 0; i < n; ++i) {
            const int q0 = lhs[lhs.size() == 1 ? 0 : i];
            const int q1 = rhs[rhs.size() == 1 ? 0 : i];
            if (q0 == q1) {
                throw ParseError(name + " operands must be distinct qubits", line);
            }
            place({q0, q1});
        }
    }

    void place(std::initializer_list<int> qs) {
        int top = 0;
        for (int q : qs) {
            top = std::max(top, layer_[static_cast<std::size_t>(q)]);
        }
        for (int q : qs) {
            layer_[static_cast<std::size_t>(q)] = top + 1;
        }
        ++out_.gate_count;
    }

    void measure(std::string_view rest, int line) {
        const auto arrow = rest.find("->");
        if (arrow == std::string_view::npos) {
            throw ParseError("measure requires '->'", line);
        }
        const auto q = operand(qregs_, rest.substr(0, arrow), line, "quantum");
        const auto c = operand(cregs_, rest.substr(arrow + 2), line, "classical");
        if (q.size() != c.size()) {
            throw ParseError("measure operand sizes differ", line);
        }
    }

    void barrier(std::string_view rest, int line) {
        std::vector<int> qs;
        for (const auto a : args(rest)) {
            const auto part = operand(qregs_, a, line, "quantum");
            qs.insert(qs.end(), part.begin(), part.end());
        }
        int top = 0;
        for (int q : qs) {
            top = std::max(top, layer_[static_cast<std::size_t>(q)]);
        }
        for (int q : qs) {
            layer_[static_cast<std::size_t>(q)] = top;
        }
    }

    std::map<std::string, Register, std::less<>> qregs_;
    std::map<std::string, Register, std::less<>> cregs_;
    int n_qubits_ = 0;
    std::vector<int> layer_;
    QasmCircuitSummary out_;
};

} // namespace

QasmCircuitSummary parse_qasm_subset(std::string_view text) { return Parser().run(text); }

} // namespace qcloud::workload
