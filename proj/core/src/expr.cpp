#include "ma2scale/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace ma2 {

namespace {

struct Parser {
    const std::string& src;
    std::size_t pos = 0;

    explicit Parser(const std::string& s) : src(s) {}

    [[noreturn]] void fail(const std::string& msg) const {
        throw std::invalid_argument("expression error at position " + std::to_string(pos) + ": " + msg);
    }

    void skip_ws() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    }

    bool eat(char c) {
        skip_ws();
        if (pos < src.size() && src[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos < src.size() ? src[pos] : '\0';
    }

    ScalarFunc parse() {
        ScalarFunc e = expr();
        skip_ws();
        if (pos != src.size()) fail("trailing input");
        return e;
    }

    ScalarFunc expr() {
        ScalarFunc lhs = term();
        while (true) {
            if (eat('+')) {
                ScalarFunc rhs = term();
                lhs = [lhs, rhs](Point2 p) { return lhs(p) + rhs(p); };
            } else if (eat('-')) {
                ScalarFunc rhs = term();
                lhs = [lhs, rhs](Point2 p) { return lhs(p) - rhs(p); };
            } else {
                return lhs;
            }
        }
    }

    ScalarFunc term() {
        ScalarFunc lhs = factor();
        while (true) {
            if (eat('*')) {
                ScalarFunc rhs = factor();
                lhs = [lhs, rhs](Point2 p) { return lhs(p) * rhs(p); };
            } else if (eat('/')) {
                ScalarFunc rhs = factor();
                lhs = [lhs, rhs](Point2 p) { return lhs(p) / rhs(p); };
            } else {
                return lhs;
            }
        }
    }

    // unary minus binds weaker than ^: -x^2 is -(x^2)
    ScalarFunc factor() {
        if (eat('-')) {
            ScalarFunc inner = factor();
            return [inner](Point2 p) { return -inner(p); };
        }
        ScalarFunc base = primary();
        if (eat('^')) {
            ScalarFunc exponent = factor(); // right associative
            return [base, exponent](Point2 p) { return std::pow(base(p), exponent(p)); };
        }
        return base;
    }

    ScalarFunc primary() {
        skip_ws();
        if (pos >= src.size()) fail("unexpected end of input");
        const char c = src[pos];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
        if (eat('(')) {
            ScalarFunc inner = expr();
            if (!eat(')')) fail("expected ')'");
            return inner;
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    ScalarFunc number() {
        const char* begin = src.c_str() + pos;
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin) fail("malformed number");
        pos += static_cast<std::size_t>(end - begin);
        return [v](Point2) { return v; };
    }

    ScalarFunc identifier() {
        const std::size_t start = pos;
        while (pos < src.size() &&
               (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
            ++pos;
        const std::string name = src.substr(start, pos - start);
        if (name == "x") return [](Point2 p) { return p.x; };
        if (name == "y") return [](Point2 p) { return p.y; };
        if (name == "pi") return [](Point2) { return 3.14159265358979323846; };

        if (!eat('(')) fail("unknown variable '" + name + "'");
        if (name == "exp" || name == "sqrt" || name == "abs") {
            ScalarFunc a = expr();
            if (!eat(')')) fail("expected ')'");
            if (name == "exp") return [a](Point2 p) { return std::exp(a(p)); };
            if (name == "sqrt") return [a](Point2 p) { return std::sqrt(a(p)); };
            return [a](Point2 p) { return std::abs(a(p)); };
        }
        if (name == "max" || name == "norm2") {
            ScalarFunc a = expr();
            if (!eat(',')) fail("expected ','");
            ScalarFunc b = expr();
            if (!eat(')')) fail("expected ')'");
            if (name == "max") return [a, b](Point2 p) { return std::max(a(p), b(p)); };
            return [a, b](Point2 p) { return std::hypot(a(p), b(p)); };
        }
        fail("unknown function '" + name + "'");
    }
};

} // namespace

ScalarFunc parse_expression(const std::string& source) {
    Parser parser(source);
    return parser.parse();
}

} // namespace ma2
