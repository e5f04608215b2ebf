#include "arsim/expr.hpp"

#include <cctype>

namespace arsim {

namespace {

class Parser {
public:
    Parser(std::string_view text, const std::map<std::string, std::int64_t>& vars)
        : text_(text), vars_(vars) {}

    std::int64_t parse() {
        auto v = sum();
        skip();
        if (pos_ != text_.size()) {
            fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        }
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& why) const {
        throw ExprError("bad expression '" + std::string(text_) + "' at column " +
                        std::to_string(pos_ + 1) + ": " + why);
    }

    void skip() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    bool starts_factor() {
        skip();
        if (pos_ >= text_.size()) {
            return false;
        }
        const auto c = static_cast<unsigned char>(text_[pos_]);
        return std::isalnum(c) || c == '_' || c == '(';
    }

    std::int64_t sum() {
        auto v = product();
        for (;;) {
            skip();
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) {
                const char op = text_[pos_++];
                const auto rhs = product();
                v = op == '+' ? v + rhs : v - rhs;
            } else {
                return v;
            }
        }
    }

    std::int64_t product() {
        auto v = unary();
        for (;;) {
            skip();
            if (pos_ < text_.size() && text_[pos_] == '*') {
                ++pos_;
                v *= unary();
            } else if (starts_factor()) {
                v *= unary();
            } else {
                return v;
            }
        }
    }

    std::int64_t unary() {
        skip();
        if (pos_ < text_.size() && text_[pos_] == '-') {
            ++pos_;
            return -unary();
        }
        return primary();
    }

    std::int64_t primary() {
        skip();
        if (pos_ >= text_.size()) {
            fail("unexpected end");
        }
        const auto c = static_cast<unsigned char>(text_[pos_]);
        if (c == '(') {
            ++pos_;
            auto v = sum();
            skip();
            if (pos_ >= text_.size() || text_[pos_] != ')') {
                fail("missing ')'");
            }
            ++pos_;
            return v;
        }
        if (std::isdigit(c)) {
            std::int64_t v = 0;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                v = v * 10 + (text_[pos_++] - '0');
            }
            return v;
        }
        if (std::isalpha(c) || c == '_') {
            const auto start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
                ++pos_;
            }
            const std::string name(text_.substr(start, pos_ - start));
            auto it = vars_.find(name);
            if (it == vars_.end()) {
                pos_ = start;
                fail("unknown variable '" + name + "'");
            }
            return it->second;
        }
        fail("unexpected '" + std::string(1, static_cast<char>(c)) + "'");
    }

    std::string_view text_;
    const std::map<std::string, std::int64_t>& vars_;
    std::size_t pos_ = 0;
};

}  // namespace

std::int64_t eval_expr(std::string_view text, const std::map<std::string, std::int64_t>& vars) {
    return Parser(text, vars).parse();
}

}  // namespace arsim
