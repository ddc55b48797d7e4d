#include "wflab/expr.hpp"

#include <cctype>
#include <cmath>

namespace wflab {

Real mollifier_bridge(Real t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const Real a = std::exp(-1.0 / t);
    const Real b = std::exp(-1.0 / (1.0 - t));
    return a / (a + b);
}

namespace {

Real bump_radial(const Point& u, int dim, const Point& center, Real r_inner, Real r_outer) {
    Real d2 = 0.0;
    for (int a = 0; a < dim; ++a) d2 += (u[a] - center[a]) * (u[a] - center[a]);
    const Real rho = std::sqrt(d2);
    if (r_outer <= r_inner) return rho <= r_inner ? 1.0 : 0.0;
    return mollifier_bridge((r_outer - rho) / (r_outer - r_inner));
}

Real bump_directional(const Point& u, int dim, const Point& dir, Real R, Real cos_inner,
                      Real cos_outer) {
    // the radial ramp spans [R/4, R]: wide transitions keep the cutoff's own
    // spectral footprint decaying inside the analysis window
    if (dim == 1) {
        // signed ramp; vanishes on the whole opposite ray
        return mollifier_bridge((u[0] * dir[0] - 0.25 * R) / (0.75 * R));
    }
    const Real rho = std::hypot(u[0], u[1]);
    if (rho <= 0.0) return 0.0;
    const Real radial = mollifier_bridge((rho - 0.25 * R) / (0.75 * R));
    if (radial == 0.0) return 0.0;
    const Real c = (u[0] * dir[0] + u[1] * dir[1]) / rho;
    const Real ang = cos_inner > cos_outer
                         ? mollifier_bridge((c - cos_outer) / (cos_inner - cos_outer))
                         : (c >= cos_outer ? 1.0 : 0.0);
    return radial * ang;
}

}  // namespace

Complex Expr::eval(const Point& x, const Point& xi) const {
    switch (kind) {
        case Kind::Const: return value;
        case Kind::Coord: return (slot == 0 ? x : xi)[axis];
        case Kind::Bracket: {
            if (bracket_kind == 0) return bracket2(x[0], x[1]);
            if (bracket_kind == 1) return bracket2(xi[0], xi[1]);
            return std::sqrt(1.0 + x[0] * x[0] + x[1] * x[1] + xi[0] * xi[0] + xi[1] * xi[1]);
        }
        case Kind::Add: return lhs->eval(x, xi) + rhs->eval(x, xi);
        case Kind::Sub: return lhs->eval(x, xi) - rhs->eval(x, xi);
        case Kind::Mul: return lhs->eval(x, xi) * rhs->eval(x, xi);
        case Kind::Div: return lhs->eval(x, xi) / rhs->eval(x, xi);
        case Kind::Neg: return -lhs->eval(x, xi);
        case Kind::Pow: {
            const Complex b = lhs->eval(x, xi);
            const Complex e = rhs->eval(x, xi);
            if (e.imag() == 0.0 && b.imag() == 0.0 && b.real() >= 0.0)
                return std::pow(b.real(), e.real());
            return std::pow(b, e);
        }
        case Kind::Exp: {
            Complex v = lhs->eval(x, xi);
            if (v.real() > 700.0) v = Complex(700.0, v.imag());  // clamp against overflow
            return std::exp(v);
        }
        case Kind::RadialBump:
            return bump_radial(slot == 0 ? x : xi, dim, center, radius_inner, radius_outer);
        case Kind::DirectionalBump:
            return bump_directional(slot == 0 ? x : xi, dim, direction, cone_R, cos_inner, cos_outer);
        case Kind::UserFn: return user_fn(x, xi);
    }
    return 0.0;
}

ExprPtr expr_const(Complex v) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Const;
    e->value = v;
    return e;
}

ExprPtr expr_coord(int slot, int axis) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Coord;
    e->slot = slot;
    e->axis = axis;
    return e;
}

ExprPtr expr_bracket(int which) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Bracket;
    e->bracket_kind = which;
    return e;
}

ExprPtr expr_binary(Expr::Kind k, ExprPtr a, ExprPtr b) {
    auto e = std::make_shared<Expr>();
    e->kind = k;
    e->lhs = std::move(a);
    e->rhs = std::move(b);
    return e;
}

ExprPtr expr_neg(ExprPtr a) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Neg;
    e->lhs = std::move(a);
    return e;
}

ExprPtr expr_exp(ExprPtr a) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Exp;
    e->lhs = std::move(a);
    return e;
}

ExprPtr expr_user(std::string name, std::function<Complex(const Point&, const Point&)> fn) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::UserFn;
    e->user_name = std::move(name);
    e->user_fn = std::move(fn);
    return e;
}

ExprPtr expr_radial_bump(int slot, int dim, Point center, Real r_inner, Real r_outer) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::RadialBump;
    e->slot = slot;
    e->dim = dim;
    e->center = center;
    e->radius_inner = r_inner;
    e->radius_outer = r_outer;
    return e;
}

ExprPtr expr_directional_bump(int slot, int dim, Point direction, Real R, Real cos_inner,
                              Real cos_outer) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::DirectionalBump;
    e->slot = slot;
    e->dim = dim;
    e->direction = direction;
    e->cone_R = R;
    e->cos_inner = cos_inner;
    e->cos_outer = cos_outer;
    return e;
}

namespace {

struct ExprParser {
    const std::string& s;
    size_t pos = 0;

    explicit ExprParser(const std::string& text) : s(text) {}

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }

    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }

    bool eat(char c) {
        if (peek() == c) {
            ++pos;
            return true;
        }
        return false;
    }

    Real number() {
        skip_ws();
        size_t end = pos;
        while (end < s.size() &&
               (std::isdigit(static_cast<unsigned char>(s[end])) || s[end] == '.' || s[end] == 'e' ||
                s[end] == 'E' ||
                ((s[end] == '+' || s[end] == '-') && end > pos && (s[end - 1] == 'e' || s[end - 1] == 'E'))))
            ++end;
        if (end == pos) throw ConfigError("expression: expected number at '" + s.substr(pos) + "'");
        const Real v = std::stod(s.substr(pos, end - pos));
        pos = end;
        return v;
    }

    std::string ident() {
        skip_ws();
        size_t end = pos;
        while (end < s.size() &&
               (std::isalnum(static_cast<unsigned char>(s[end])) || s[end] == '_'))
            ++end;
        std::string name = s.substr(pos, end - pos);
        pos = end;
        return name;
    }

    ExprPtr primary() {
        const char c = peek();
        if (c == '(') {
            ++pos;
            ExprPtr e = expression(0);
            if (!eat(')')) throw ConfigError("expression: missing ')'");
            return e;
        }
        if (c == '-') {
            ++pos;
            return expr_neg(power());
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return expr_const(number());
        std::string name = ident();
        if (name.empty()) throw ConfigError("expression: unexpected input '" + s.substr(pos) + "'");
        if (name == "exp") {
            if (!eat('(')) throw ConfigError("expression: exp expects '('");
            ExprPtr arg = expression(0);
            if (!eat(')')) throw ConfigError("expression: missing ')'");
            return expr_exp(std::move(arg));
        }
        if (name == "i") return expr_const(kI);
        if (name == "pi") return expr_const(kPi);
        if (name == "x" || name == "x1") return expr_coord(0, 0);
        if (name == "t" || name == "x2" || name == "y") return expr_coord(0, 1);
        if (name == "xi" || name == "xi1") return expr_coord(1, 0);
        if (name == "tau" || name == "xi2") return expr_coord(1, 1);
        if (name == "bx") return expr_bracket(0);
        if (name == "bxi") return expr_bracket(1);
        if (name == "bj") return expr_bracket(2);
        throw ConfigError("expression: unknown identifier '" + name + "'");
    }

    ExprPtr power() {
        ExprPtr base = primary();
        if (eat('^')) {
            // right-associative
            ExprPtr expo = peek() == '-' ? (++pos, expr_neg(power())) : power();
            return expr_binary(Expr::Kind::Pow, std::move(base), std::move(expo));
        }
        return base;
    }

    ExprPtr expression(int min_prec) {
        ExprPtr lhs = power();
        for (;;) {
            const char c = peek();
            int prec = (c == '+' || c == '-') ? 1 : (c == '*' || c == '/') ? 2 : 0;
            if (prec == 0 || prec < min_prec) return lhs;
            ++pos;
            ExprPtr rhs = expression(prec + 1);
            Expr::Kind k = c == '+'   ? Expr::Kind::Add
                           : c == '-' ? Expr::Kind::Sub
                           : c == '*' ? Expr::Kind::Mul
                                      : Expr::Kind::Div;
            lhs = expr_binary(k, std::move(lhs), std::move(rhs));
        }
    }
};

}  // namespace

ExprPtr parse_expr(const std::string& text) {
    ExprParser p(text);
    ExprPtr e = p.expression(0);
    p.skip_ws();
    if (p.pos != text.size())
        throw ConfigError("expression: trailing input '" + text.substr(p.pos) + "'");
    return e;
}

}  // namespace wflab
