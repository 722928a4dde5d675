#pragma once

#include <Eigen/Dense>
#include <cctype>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "formlab/error.hpp"

namespace formlab {

/// Tiny closed-form scalar expression evaluator for coordinate functions:
/// +, -, *, /, ^, parentheses, sin/cos/exp/sqrt/abs, the constant pi and the
/// variables x1..x4.
class ScalarExpr {
 public:
  static ScalarExpr parse(const std::string& text) {
    Parser p{text, 0};
    ScalarExpr e;
    e.root_ = p.parseSum();
    p.skipWs();
    require(p.pos == text.size(), ErrorCode::ParseError,
            "trailing characters in expression '" + text + "'");
    return e;
  }

  double operator()(const Eigen::VectorXd& x) const {
    require(root_ != nullptr, ErrorCode::EvalError, "empty expression");
    return root_->eval(x);
  }

 private:
  struct Node {
    virtual ~Node() = default;
    virtual double eval(const Eigen::VectorXd& x) const = 0;
  };
  using NodePtr = std::shared_ptr<const Node>;

  struct Constant : Node {
    double value;
    explicit Constant(double v) : value(v) {}
    double eval(const Eigen::VectorXd&) const override { return value; }
  };
  struct Variable : Node {
    int index;
    explicit Variable(int i) : index(i) {}
    double eval(const Eigen::VectorXd& x) const override {
      require(index < x.size(), ErrorCode::EvalError, "variable index exceeds the dimension");
      return x(index);
    }
  };
  struct Unary : Node {
    char op;  // 'n' negate, 's' sin, 'c' cos, 'e' exp, 'q' sqrt, 'a' abs
    NodePtr arg;
    double eval(const Eigen::VectorXd& x) const override {
      const double v = arg->eval(x);
      switch (op) {
        case 'n': return -v;
        case 's': return std::sin(v);
        case 'c': return std::cos(v);
        case 'e': return std::exp(v);
        case 'q': return std::sqrt(v);
        case 'a': return std::abs(v);
      }
      return v;
    }
  };
  struct Binary : Node {
    char op;
    NodePtr lhs, rhs;
    double eval(const Eigen::VectorXd& x) const override {
      const double a = lhs->eval(x), b = rhs->eval(x);
      switch (op) {
        case '+': return a + b;
        case '-': return a - b;
        case '*': return a * b;
        case '/': return a / b;
        case '^': return std::pow(a, b);
      }
      return 0.0;
    }
  };

  struct Parser {
    const std::string& text;
    std::size_t pos;

    void skipWs() {
      while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    bool eat(char c) {
      skipWs();
      if (pos < text.size() && text[pos] == c) {
        ++pos;
        return true;
      }
      return false;
    }

    NodePtr parseSum() {
      NodePtr lhs = parseProduct();
      while (true) {
        skipWs();
        if (eat('+')) {
          auto node = std::make_shared<Binary>();
          node->op = '+';
          node->lhs = lhs;
          node->rhs = parseProduct();
          lhs = node;
        } else if (eat('-')) {
          auto node = std::make_shared<Binary>();
          node->op = '-';
          node->lhs = lhs;
          node->rhs = parseProduct();
          lhs = node;
        } else {
          return lhs;
        }
      }
    }

    NodePtr parseProduct() {
      NodePtr lhs = parsePower();
      while (true) {
        skipWs();
        if (eat('*')) {
          auto node = std::make_shared<Binary>();
          node->op = '*';
          node->lhs = lhs;
          node->rhs = parsePower();
          lhs = node;
        } else if (eat('/')) {
          auto node = std::make_shared<Binary>();
          node->op = '/';
          node->lhs = lhs;
          node->rhs = parsePower();
          lhs = node;
        } else {
          return lhs;
        }
      }
    }

    NodePtr parsePower() {
      NodePtr base = parseAtom();
      if (eat('^')) {
        auto node = std::make_shared<Binary>();
        node->op = '^';
        node->lhs = base;
        node->rhs = parsePower();  // right associative
        return node;
      }
      return base;
    }

    NodePtr parseAtom() {
      skipWs();
      require(pos < text.size(), ErrorCode::ParseError, "unexpected end of expression");
      const char c = text[pos];
      if (c == '(') {
        ++pos;
        NodePtr inner = parseSum();
        require(eat(')'), ErrorCode::ParseError, "missing ')'");
        return inner;
      }
      if (c == '-') {
        ++pos;
        auto node = std::make_shared<Unary>();
        node->op = 'n';
        node->arg = parseAtom();
        return node;
      }
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        std::size_t used = 0;
        const double v = std::stod(text.substr(pos), &used);
        pos += used;
        return std::make_shared<Constant>(v);
      }
      if (std::isalpha(static_cast<unsigned char>(c))) {
        std::size_t end = pos;
        while (end < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[end])) || text[end] == '_'))
          ++end;
        const std::string name = text.substr(pos, end - pos);
        pos = end;
        if (name == "pi") return std::make_shared<Constant>(M_PI);
        if (name.size() == 2 && name[0] == 'x' && name[1] >= '1' && name[1] <= '8')
          return std::make_shared<Variable>(name[1] - '1');
        const auto fn = [&](char code) {
          require(eat('('), ErrorCode::ParseError, "missing '(' after " + name);
          auto node = std::make_shared<Unary>();
          node->op = code;
          node->arg = parseSum();
          require(eat(')'), ErrorCode::ParseError, "missing ')' after " + name);
          return node;
        };
        if (name == "sin") return fn('s');
        if (name == "cos") return fn('c');
        if (name == "exp") return fn('e');
        if (name == "sqrt") return fn('q');
        if (name == "abs") return fn('a');
        fail(ErrorCode::ParseError, "unknown identifier '" + name + "'");
      }
      fail(ErrorCode::ParseError, std::string("unexpected character '") + c + "'");
    }
  };

  NodePtr root_;
};

}  // namespace formlab
