#include "chebsolve/driver.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>

namespace chebsolve {

struct Expression::Node {
    enum class Op { Literal, Variable, Add, Sub, Mul, Div, Pow, Neg, Call };

    Op op;
    double value = 0;
    int index = 0;
    double (*fun)(double) = nullptr;
    std::shared_ptr<const Node> a, b;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make_literal(double v) {
    auto n = std::make_shared<Node>();
    n->op = Node::Op::Literal;
    n->value = v;
    return n;
}

NodePtr make_variable(int index) {
    auto n = std::make_shared<Node>();
    n->op = Node::Op::Variable;
    n->index = index;
    return n;
}

NodePtr make_unary(Node::Op op, NodePtr a, double (*fun)(double) = nullptr) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->fun = fun;
    n->a = std::move(a);
    return n;
}

NodePtr make_binary(Node::Op op, NodePtr a, NodePtr b) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

const std::map<std::string, double (*)(double)>& function_table() {
    static const std::map<std::string, double (*)(double)> table = {
        {"sin", std::sin},   {"cos", std::cos},   {"tan", std::tan},
        {"sinh", std::sinh}, {"cosh", std::cosh}, {"tanh", std::tanh},
        {"exp", std::exp},   {"log", std::log},   {"sqrt", std::sqrt},
    };
    return table;
}

bool is_non_analytic(const std::string& name) {
    static const char* names[] = {"abs",  "fabs", "floor", "ceil", "round", "trunc",
                                  "sign", "min",  "max",   "mod",  "fmod",  "heaviside"};
    for (const char* s : names)
        if (name == s) return true;
    return false;
}

class Parser {
public:
    Parser(const std::string& text, int dims) : m_text(text), m_dims(dims) {}

    NodePtr parse() {
        NodePtr root = parseSum();
        skipSpace();
        if (m_pos != m_text.size()) fail(m_pos, "unexpected '" + std::string(1, m_text[m_pos]) + "'");
        return root;
    }

private:
    [[noreturn]] void fail(std::size_t pos, const std::string& what) const {
        throw InputError("parse error at position " + std::to_string(pos) + ": " + what);
    }

    void skipSpace() {
        while (m_pos < m_text.size() && std::isspace(static_cast<unsigned char>(m_text[m_pos]))) ++m_pos;
    }

    bool consume(char c) {
        skipSpace();
        if (m_pos < m_text.size() && m_text[m_pos] == c) {
            ++m_pos;
            return true;
        }
        return false;
    }

    char peek() {
        skipSpace();
        return m_pos < m_text.size() ? m_text[m_pos] : '\0';
    }

    NodePtr parseSum() {
        NodePtr lhs = parseProduct();
        for (;;) {
            if (consume('+'))
                lhs = make_binary(Node::Op::Add, lhs, parseProduct());
            else if (consume('-'))
                lhs = make_binary(Node::Op::Sub, lhs, parseProduct());
            else
                return lhs;
        }
    }

    NodePtr parseProduct() {
        NodePtr lhs = parseUnary();
        for (;;) {
            if (consume('*'))
                lhs = make_binary(Node::Op::Mul, lhs, parseUnary());
            else if (consume('/'))
                lhs = make_binary(Node::Op::Div, lhs, parseUnary());
            else
                return lhs;
        }
    }

    NodePtr parseUnary() {
        if (consume('-')) return make_unary(Node::Op::Neg, parseUnary());
        if (consume('+')) return parseUnary();
        return parsePower();
    }

    NodePtr parsePower() {
        NodePtr base = parseAtom();
        if (consume('^')) return make_binary(Node::Op::Pow, base, parseUnary());
        return base;
    }

    NodePtr parseAtom() {
        const char c = peek();
        if (c == '(') {
            ++m_pos;
            NodePtr inner = parseSum();
            if (!consume(')')) fail(m_pos, "expected ')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parseNumber();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parseIdentifier();
        if (c == '\0') fail(m_pos, "unexpected end of input");
        fail(m_pos, std::string("unexpected '") + c + "'");
    }

    NodePtr parseNumber() {
        const std::size_t start = m_pos;
        const char* begin = m_text.c_str() + start;
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin) fail(start, "malformed number");
        m_pos = start + static_cast<std::size_t>(end - begin);
        return make_literal(v);
    }

    NodePtr parseIdentifier() {
        const std::size_t start = m_pos;
        while (m_pos < m_text.size() &&
               (std::isalnum(static_cast<unsigned char>(m_text[m_pos])) || m_text[m_pos] == '_'))
            ++m_pos;
        const std::string name = m_text.substr(start, m_pos - start);

        if (name == "pi") return make_literal(M_PI);
        if (name == "e") return make_literal(M_E);

        if (name.size() >= 2 && name[0] == 'x' &&
            std::isdigit(static_cast<unsigned char>(name[1]))) {
            char* end = nullptr;
            const long idx = std::strtol(name.c_str() + 1, &end, 10);
            if (*end != '\0') fail(start, "unknown identifier '" + name + "'");
            if (idx < 1 || idx > m_dims)
                fail(start, "variable '" + name + "' is out of range for a " +
                                std::to_string(m_dims) + "-dimensional problem");
            return make_variable(static_cast<int>(idx - 1));
        }

        auto it = function_table().find(name);
        if (it != function_table().end()) {
            if (!consume('(')) fail(m_pos, "expected '(' after '" + name + "'");
            NodePtr arg = parseSum();
            if (!consume(')')) fail(m_pos, "expected ')'");
            return make_unary(Node::Op::Call, std::move(arg), it->second);
        }

        if (is_non_analytic(name))
            fail(start, "'" + name + "' is not smooth; only analytic functions are supported");
        fail(start, "unknown identifier '" + name + "'");
    }

    const std::string& m_text;
    int m_dims;
    std::size_t m_pos = 0;
};

double eval_node(const Node& n, const Eigen::VectorXd& x) {
    switch (n.op) {
        case Node::Op::Literal:
            return n.value;
        case Node::Op::Variable:
            return x[n.index];
        case Node::Op::Add:
            return eval_node(*n.a, x) + eval_node(*n.b, x);
        case Node::Op::Sub:
            return eval_node(*n.a, x) - eval_node(*n.b, x);
        case Node::Op::Mul:
            return eval_node(*n.a, x) * eval_node(*n.b, x);
        case Node::Op::Div:
            return eval_node(*n.a, x) / eval_node(*n.b, x);
        case Node::Op::Pow:
            return std::pow(eval_node(*n.a, x), eval_node(*n.b, x));
        case Node::Op::Neg:
            return -eval_node(*n.a, x);
        case Node::Op::Call:
            return n.fun(eval_node(*n.a, x));
    }
    return 0;
}

}  // namespace

double Expression::eval(const Eigen::VectorXd& x) const {
    if (!m_root) throw InputError("Expression: empty expression");
    if (x.size() != m_arity) throw InputError("Expression: point dimension mismatch");
    return eval_node(*m_root, x);
}

TargetFunction Expression::function() const {
    if (!m_root) throw InputError("Expression: empty expression");
    TargetFunction f;
    f.arity = m_arity;
    f.eval = [root = m_root](const Eigen::VectorXd& x) { return eval_node(*root, x); };
    return f;
}

Expression parse_expression(const std::string& text, int dims) {
    if (dims < 1) throw InputError("parse_expression: dims must be positive");
    Expression e;
    e.m_root = Parser(text, dims).parse();
    e.m_arity = dims;
    return e;
}

}  // namespace chebsolve
