#pragma once

// Small arithmetic expression language over one real variable `k`.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?          right associative
//   primary := number | 'k' | '|' expr '|' | func '(' expr ')' | '(' expr ')'
//   func    := abs | sqrt | tanh | coth | exp | log

#include <cctype>
#include <cmath>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "kplab/error.hpp"

namespace kplab {

class Expression {
public:
    static Expression parse(std::string_view text) {
        Parser p{text, 0};
        Expression e;
        e.root_ = p.parse_expr();
        p.skip_ws();
        if (p.pos != text.size())
            fail(ErrorKind::InvalidArgument,
                 "unexpected '" + std::string(text.substr(p.pos, 1)) + "' in expression at offset " +
                     std::to_string(p.pos));
        e.text_ = std::string(text);
        return e;
    }

    [[nodiscard]] double operator()(double k) const { return eval(*root_, k); }
    [[nodiscard]] const std::string& text() const noexcept { return text_; }

private:
    enum class Op { Num, Var, Add, Sub, Mul, Div, Pow, Neg, Abs, Sqrt, Tanh, Coth, Exp, Log };

    struct Node {
        Op op;
        double value = 0.0;
        std::shared_ptr<const Node> lhs, rhs;
    };
    using NodePtr = std::shared_ptr<const Node>;

    static NodePtr make(Op op, NodePtr l = nullptr, NodePtr r = nullptr, double v = 0.0) {
        return std::make_shared<const Node>(Node{op, v, std::move(l), std::move(r)});
    }

    static double eval(const Node& n, double k) {
        switch (n.op) {
            case Op::Num: return n.value;
            case Op::Var: return k;
            case Op::Add: return eval(*n.lhs, k) + eval(*n.rhs, k);
            case Op::Sub: return eval(*n.lhs, k) - eval(*n.rhs, k);
            case Op::Mul: return eval(*n.lhs, k) * eval(*n.rhs, k);
            case Op::Div: return eval(*n.lhs, k) / eval(*n.rhs, k);
            case Op::Pow: return std::pow(eval(*n.lhs, k), eval(*n.rhs, k));
            case Op::Neg: return -eval(*n.lhs, k);
            case Op::Abs: return std::abs(eval(*n.lhs, k));
            case Op::Sqrt: return std::sqrt(eval(*n.lhs, k));
            case Op::Tanh: return std::tanh(eval(*n.lhs, k));
            case Op::Coth: return 1.0 / std::tanh(eval(*n.lhs, k));
            case Op::Exp: return std::exp(eval(*n.lhs, k));
            case Op::Log: return std::log(eval(*n.lhs, k));
        }
        return std::nan("");
    }

    struct Parser {
        std::string_view s;
        std::size_t pos;

        void skip_ws() {
            while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        }
        bool accept(char c) {
            skip_ws();
            if (pos < s.size() && s[pos] == c) {
                ++pos;
                return true;
            }
            return false;
        }
        void expect(char c) {
            if (!accept(c))
                fail(ErrorKind::InvalidArgument,
                     std::string("expected '") + c + "' in expression at offset " + std::to_string(pos));
        }

        NodePtr parse_expr() {
            NodePtr lhs = parse_term();
            for (;;) {
                if (accept('+'))
                    lhs = make(Op::Add, lhs, parse_term());
                else if (accept('-'))
                    lhs = make(Op::Sub, lhs, parse_term());
                else
                    return lhs;
            }
        }
        NodePtr parse_term() {
            NodePtr lhs = parse_unary();
            for (;;) {
                if (accept('*'))
                    lhs = make(Op::Mul, lhs, parse_unary());
                else if (accept('/'))
                    lhs = make(Op::Div, lhs, parse_unary());
                else
                    return lhs;
            }
        }
        NodePtr parse_unary() {
            if (accept('-')) return make(Op::Neg, parse_unary());
            if (accept('+')) return parse_unary();
            return parse_power();
        }
        NodePtr parse_power() {
            NodePtr base = parse_primary();
            if (accept('^')) return make(Op::Pow, base, parse_unary());
            return base;
        }
        NodePtr parse_primary() {
            skip_ws();
            if (pos >= s.size()) fail(ErrorKind::InvalidArgument, "unexpected end of expression");
            const char c = s[pos];
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
                const std::string rest(s.substr(pos));
                std::size_t used = 0;
                const double v = std::stod(rest, &used);
                pos += used;
                return make(Op::Num, nullptr, nullptr, v);
            }
            if (accept('(')) {
                NodePtr inner = parse_expr();
                expect(')');
                return inner;
            }
            if (accept('|')) {
                NodePtr inner = parse_expr();
                expect('|');
                return make(Op::Abs, inner);
            }
            if (std::isalpha(static_cast<unsigned char>(c))) {
                std::size_t end = pos;
                while (end < s.size() && std::isalpha(static_cast<unsigned char>(s[end]))) ++end;
                const std::string_view word = s.substr(pos, end - pos);
                pos = end;
                if (word == "k") return make(Op::Var);
                static constexpr std::pair<std::string_view, Op> funcs[] = {
                    {"abs", Op::Abs},   {"sqrt", Op::Sqrt}, {"tanh", Op::Tanh},
                    {"coth", Op::Coth}, {"exp", Op::Exp},   {"log", Op::Log}};
                for (const auto& [name, op] : funcs) {
                    if (word == name) {
                        expect('(');
                        NodePtr arg = parse_expr();
                        expect(')');
                        return make(op, arg);
                    }
                }
                fail(ErrorKind::InvalidArgument, "unknown identifier '" + std::string(word) + "' in expression");
            }
            fail(ErrorKind::InvalidArgument,
                 std::string("unexpected '") + c + "' in expression at offset " + std::to_string(pos));
        }
    };

    NodePtr root_;
    std::string text_;
};

}  // namespace kplab
