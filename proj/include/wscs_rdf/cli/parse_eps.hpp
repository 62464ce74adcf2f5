#pragma once

#include <cctype>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <string>
#include <string_view>

#include "wscs_rdf/error.hpp"
#include "wscs_rdf/symbolic_fraction.hpp"

namespace wscs_rdf::cli {

namespace detail {

class EpsParser {
  public:
    explicit EpsParser(std::string_view text) : text_(text) {}

    // expr := decimal | int "/" int | pi_term [("+"|"-") int "/" int]
    // pi_term := ["-"] [int "*"] "pi" ["/" int]
    SymbolicFraction parse() {
        skip_ws();
        if (at_end()) {
            fail("empty epsilon expression");
        }
        SymbolicFraction out;
        if (peek() == '-' || peek() == 'p') {
            out = parse_pi_term(1);
        } else {
            const std::size_t start = pos_;
            const std::int64_t lead = parse_int();
            skip_ws();
            if (!at_end() && peek() == '*') {
                ++pos_;
                skip_ws();
                out = parse_pi_term(lead);
            } else if (!at_end() && peek() == '/') {
                ++pos_;
                skip_ws();
                const std::size_t den_pos = pos_;
                const std::int64_t den = parse_int();
                if (den == 0) {
                    fail("zero denominator", den_pos);
                }
                out = wrap(den_pos, [&] { return SymbolicFraction::rational(lead, den); });
            } else if (!at_end() && (peek() == '.' || peek() == 'e' || peek() == 'E')) {
                pos_ = start;
                out = parse_decimal();
            } else {
                out = wrap(start, [&] { return SymbolicFraction::rational(lead, 1); });
            }
        }
        skip_ws();
        if (!at_end()) {
            fail(std::string("unexpected character '") + peek() + "'");
        }
        return out;
    }

  private:
    SymbolicFraction parse_pi_term(std::int64_t coefficient) {
        const std::size_t start = pos_;
        std::int64_t sign = 1;
        if (peek() == '-') {
            sign = -1;
            ++pos_;
            skip_ws();
            if (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
                coefficient = parse_int();
                skip_ws();
                expect('*');
                skip_ws();
            }
        }
        if (text_.substr(pos_, 2) != "pi") {
            fail("expected 'pi'");
        }
        pos_ += 2;
        skip_ws();
        std::int64_t b = 1;
        if (!at_end() && peek() == '/') {
            ++pos_;
            skip_ws();
            const std::size_t den_pos = pos_;
            b = parse_int();
            if (b == 0) {
                fail("zero denominator", den_pos);
            }
            skip_ws();
        }
        std::int64_t c = 0;
        std::int64_t d = 1;
        if (!at_end() && (peek() == '+' || peek() == '-')) {
            const std::int64_t csign = peek() == '+' ? 1 : -1;
            ++pos_;
            skip_ws();
            c = csign * parse_int();
            skip_ws();
            expect('/');
            skip_ws();
            const std::size_t den_pos = pos_;
            d = parse_int();
            if (d == 0) {
                fail("zero denominator", den_pos);
            }
        }
        return wrap(start, [&] { return SymbolicFraction::pi_expr(sign * coefficient, b, c, d); });
    }

    SymbolicFraction parse_decimal() {
        const std::size_t start = pos_;
        std::string buf(text_.substr(pos_));
        char* end = nullptr;
        const double v = std::strtod(buf.c_str(), &end);
        const std::size_t used = static_cast<std::size_t>(end - buf.c_str());
        if (used == 0) {
            fail("malformed decimal");
        }
        pos_ += used;
        return wrap(start, [&] { return SymbolicFraction::decimal(v); });
    }

    std::int64_t parse_int() {
        const std::size_t start = pos_;
        std::int64_t v = 0;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
            const int digit = peek() - '0';
            if (v > (std::numeric_limits<std::int64_t>::max() - digit) / 10) {
                fail("integer too large", start);
            }
            v = v * 10 + digit;
            ++pos_;
        }
        if (pos_ == start) {
            fail("expected an integer");
        }
        return v;
    }

    template <typename F>
    SymbolicFraction wrap(std::size_t at, F&& make) {
        try {
            return make();
        } catch (const ParseError&) {
            throw;
        } catch (const ConfigError& e) {
            fail(e.what(), at);
        }
    }

    void expect(char c) {
        if (at_end() || peek() != c) {
            fail(std::string("expected '") + c + "'");
        }
        ++pos_;
    }

    void skip_ws() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) {
            ++pos_;
        }
    }

    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }

    [[noreturn]] void fail(const std::string& msg) const { fail(msg, pos_); }
    [[noreturn]] void fail(const std::string& msg, std::size_t at) const {
        throw ParseError("invalid epsilon expression '" + std::string(text_) + "': " + msg, at);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

} // namespace detail

/// Parses "1/2", "pi/7", "5*pi/32", "0.6", or "pi/4-1/2" style expressions.
inline SymbolicFraction parse_eps(std::string_view expr) {
    return detail::EpsParser(expr).parse();
}

} // namespace wscs_rdf::cli
