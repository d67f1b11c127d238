#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "quasifix/errors.hpp"
#include "quasifix/vec.hpp"

namespace quasifix {

/// One scalar formula over the variables x1..xn, parsed by recursive descent.
///
/// Grammar (standard precedence, lowest first):
///   expr        := additive
///   additive    := multiplicative (("+" | "-") multiplicative)*
///   multiplicative := unary (("*" | "/") unary)*
///   unary       := "-" unary | primary
///   primary     := NUMBER | VARIABLE | call | "(" expr ")"
///   call        := "abs" "(" expr ")"
///               |  "min" "(" expr "," expr ")"
///               |  "max" "(" expr "," expr ")"
///               |  "if" "(" comparison "," expr "," expr ")"
///   comparison  := expr ("<=" | "<" | ">=" | ">") expr
///   VARIABLE    := "x" followed by a 1-based coordinate index (x1, x2, ...)
///   NUMBER      := decimal literal, optionally with fraction and exponent
///
/// "<=" and ">=" may also be written as the single characters U+2264 and
/// U+2265. Only the selected branch of an "if" is evaluated.
class Expression {
public:
    static Expression parse(const std::string& text) {
        Parser parser(text);
        Expression expr;
        expr.text_ = text;
        expr.root_ = parser.parse_full(expr.max_variable_);
        return expr;
    }

    double eval(const Vector& x) const {
        return eval_node(*root_, x);
    }

    /// Largest coordinate index referenced, 0 for constant formulas.
    int max_variable() const { return max_variable_; }

    const std::string& text() const { return text_; }

private:
    enum class Op { Number, Variable, Neg, Add, Sub, Mul, Div, Abs, Min, Max, If };
    enum class Cmp { Le, Lt, Ge, Gt };

    struct Node {
        Op op;
        double value = 0.0;
        int var_index = 0;
        Cmp cmp = Cmp::Le;
        std::vector<std::shared_ptr<const Node>> kids;
    };
    using NodePtr = std::shared_ptr<const Node>;

    double eval_node(const Node& node, const Vector& x) const {
        switch (node.op) {
        case Op::Number:
            return node.value;
        case Op::Variable:
            if (node.var_index > static_cast<int>(x.size())) {
                throw ExpressionEvalError("variable x" + std::to_string(node.var_index) +
                                          " undefined in dimension " + std::to_string(x.size()) +
                                          " for '" + text_ + "'");
            }
            return x[static_cast<std::size_t>(node.var_index - 1)];
        case Op::Neg:
            return -eval_node(*node.kids[0], x);
        case Op::Add:
            return eval_node(*node.kids[0], x) + eval_node(*node.kids[1], x);
        case Op::Sub:
            return eval_node(*node.kids[0], x) - eval_node(*node.kids[1], x);
        case Op::Mul:
            return eval_node(*node.kids[0], x) * eval_node(*node.kids[1], x);
        case Op::Div: {
            const double denom = eval_node(*node.kids[1], x);
            if (denom == 0.0) throw ExpressionEvalError("division by zero in '" + text_ + "'");
            return eval_node(*node.kids[0], x) / denom;
        }
        case Op::Abs:
            return std::abs(eval_node(*node.kids[0], x));
        case Op::Min:
            return std::min(eval_node(*node.kids[0], x), eval_node(*node.kids[1], x));
        case Op::Max:
            return std::max(eval_node(*node.kids[0], x), eval_node(*node.kids[1], x));
        case Op::If: {
            const double lhs = eval_node(*node.kids[0], x);
            const double rhs = eval_node(*node.kids[1], x);
            bool taken = false;
            switch (node.cmp) {
            case Cmp::Le: taken = lhs <= rhs; break;
            case Cmp::Lt: taken = lhs < rhs; break;
            case Cmp::Ge: taken = lhs >= rhs; break;
            case Cmp::Gt: taken = lhs > rhs; break;
            }
            return eval_node(*node.kids[taken ? 2 : 3], x);
        }
        }
        throw ExpressionEvalError("corrupt expression node");
    }

    class Parser {
    public:
        explicit Parser(const std::string& text) : text_(text) {}

        NodePtr parse_full(int& max_variable) {
            NodePtr root = parse_expr();
            skip_space();
            if (pos_ != text_.size()) fail("trailing input");
            max_variable = max_variable_;
            return root;
        }

    private:
        [[noreturn]] void fail(const std::string& what) const {
            throw ExpressionParseError(what + " at position " + std::to_string(pos_) + " in '" +
                                       text_ + "'");
        }

        void skip_space() {
            while (pos_ < text_.size() &&
                   std::isspace(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
            }
        }

        bool consume(char c) {
            skip_space();
            if (pos_ < text_.size() && text_[pos_] == c) {
                ++pos_;
                return true;
            }
            return false;
        }

        void expect(char c) {
            if (!consume(c)) fail(std::string("expected '") + c + "'");
        }

        bool consume_literal(const char* lit) {
            skip_space();
            const std::size_t len = std::char_traits<char>::length(lit);
            if (text_.compare(pos_, len, lit) == 0) {
                pos_ += len;
                return true;
            }
            return false;
        }

        static NodePtr make(Op op, std::vector<NodePtr> kids) {
            auto node = std::make_shared<Node>();
            node->op = op;
            node->kids = std::move(kids);
            return node;
        }

        NodePtr parse_expr() { return parse_additive(); }

        NodePtr parse_additive() {
            NodePtr lhs = parse_multiplicative();
            for (;;) {
                if (consume('+')) {
                    lhs = make(Op::Add, {lhs, parse_multiplicative()});
                } else if (consume('-')) {
                    lhs = make(Op::Sub, {lhs, parse_multiplicative()});
                } else {
                    return lhs;
                }
            }
        }

        NodePtr parse_multiplicative() {
            NodePtr lhs = parse_unary();
            for (;;) {
                if (consume('*')) {
                    lhs = make(Op::Mul, {lhs, parse_unary()});
                } else if (consume('/')) {
                    lhs = make(Op::Div, {lhs, parse_unary()});
                } else {
                    return lhs;
                }
            }
        }

        NodePtr parse_unary() {
            if (consume('-')) return make(Op::Neg, {parse_unary()});
            return parse_primary();
        }

        NodePtr parse_primary() {
            skip_space();
            if (pos_ >= text_.size()) fail("unexpected end of input");
            const char c = text_[pos_];
            if (c == '(') {
                ++pos_;
                NodePtr inner = parse_expr();
                expect(')');
                return inner;
            }
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
            fail(std::string("unexpected character '") + c + "'");
        }

        NodePtr parse_number() {
            double value = 0.0;
            const char* begin = text_.data() + pos_;
            const char* end = text_.data() + text_.size();
            const auto [ptr, ec] = std::from_chars(begin, end, value);
            if (ec != std::errc() || ptr == begin) fail("malformed number");
            pos_ = static_cast<std::size_t>(ptr - text_.data());
            auto node = std::make_shared<Node>();
            node->op = Op::Number;
            node->value = value;
            return node;
        }

        NodePtr parse_ident() {
            const std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
                ++pos_;
            }
            const std::string name = text_.substr(start, pos_ - start);
            if (name == "abs") return parse_call(Op::Abs, 1);
            if (name == "min") return parse_call(Op::Min, 2);
            if (name == "max") return parse_call(Op::Max, 2);
            if (name == "if") return parse_if();
            if (name.size() >= 2 && name[0] == 'x' && name[1] != '0' &&
                name.find_first_not_of("0123456789", 1) == std::string::npos) {
                auto node = std::make_shared<Node>();
                node->op = Op::Variable;
                node->var_index = std::stoi(name.substr(1));
                max_variable_ = std::max(max_variable_, node->var_index);
                return node;
            }
            pos_ = start;
            fail("unknown identifier '" + name + "'");
        }

        NodePtr parse_call(Op op, int arity) {
            expect('(');
            std::vector<NodePtr> kids;
            kids.push_back(parse_expr());
            for (int i = 1; i < arity; ++i) {
                expect(',');
                kids.push_back(parse_expr());
            }
            expect(')');
            return make(op, std::move(kids));
        }

        NodePtr parse_if() {
            expect('(');
            NodePtr lhs = parse_expr();
            Cmp cmp;
            if (consume_literal("<=") || consume_literal("≤")) {
                cmp = Cmp::Le;
            } else if (consume_literal(">=") || consume_literal("≥")) {
                cmp = Cmp::Ge;
            } else if (consume('<')) {
                cmp = Cmp::Lt;
            } else if (consume('>')) {
                cmp = Cmp::Gt;
            } else {
                fail("expected comparison operator in if(...)");
            }
            NodePtr rhs = parse_expr();
            expect(',');
            NodePtr then_branch = parse_expr();
            expect(',');
            NodePtr else_branch = parse_expr();
            expect(')');
            auto node = std::make_shared<Node>();
            node->op = Op::If;
            node->cmp = cmp;
            node->kids = {lhs, rhs, then_branch, else_branch};
            return node;
        }

        const std::string& text_;
        std::size_t pos_ = 0;
        int max_variable_ = 0;
    };

    NodePtr root_;
    std::string text_;
    int max_variable_ = 0;
};

} // namespace quasifix
