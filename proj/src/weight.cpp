#include "wflab/weight.hpp"

#include <cctype>
#include <cmath>
#include <random>
#include <sstream>

namespace wflab {

namespace {

constexpr Real kSaturate = 1e300;

Real atom_eval(const WeightAtom& a, Real x1, Real x2, Real xi1, Real xi2) {
    switch (a.kind) {
        case WeightAtom::Kind::BracketX:
            return std::pow(std::sqrt(1.0 + x1 * x1 + x2 * x2), a.exponent);
        case WeightAtom::Kind::BracketXi:
            return std::pow(std::sqrt(1.0 + xi1 * xi1 + xi2 * xi2), a.exponent);
        case WeightAtom::Kind::BracketJoint:
            return std::pow(std::sqrt(1.0 + x1 * x1 + x2 * x2 + xi1 * xi1 + xi2 * xi2), a.exponent);
        case WeightAtom::Kind::User:
            return a.user->eval(x1, x2, xi1, xi2);
    }
    return 1.0;
}

/// Deterministic uniform double in [0,1) from a raw 64-bit stream;
/// std::uniform_real_distribution is implementation-defined.
Real u01(std::mt19937_64& rng) { return (rng() >> 11) * 0x1.0p-53; }

}  // namespace

void Weight::check_exponent(Real e) {
    if (!(std::abs(e) <= 64.0)) throw ContractError("Weight: |exponent| must be <= 64");
}

Weight Weight::atom(WeightAtom a) {
    Weight w;
    w.op_ = Op::Atom;
    w.atom_ = std::move(a);
    return w;
}

Weight Weight::bracket_x(Real t) {
    check_exponent(t);
    if (t == 0.0) return one();
    return atom({WeightAtom::Kind::BracketX, t, nullptr});
}

Weight Weight::bracket_xi(Real s) {
    check_exponent(s);
    if (s == 0.0) return one();
    return atom({WeightAtom::Kind::BracketXi, s, nullptr});
}

Weight Weight::bracket_joint(Real u) {
    check_exponent(u);
    if (u == 0.0) return one();
    return atom({WeightAtom::Kind::BracketJoint, u, nullptr});
}

Weight Weight::sigma(Real m, Real mu) { return bracket_x(m) * bracket_xi(mu); }

Weight Weight::user(UserWeightFn fn) {
    WeightAtom a;
    a.kind = WeightAtom::Kind::User;
    a.exponent = 1.0;
    a.user = std::make_shared<UserWeightFn>(std::move(fn));
    return atom(std::move(a));
}

Weight Weight::operator*(const Weight& o) const {
    if (op_ == Op::One) return o;
    if (o.op_ == Op::One) return *this;
    Weight w;
    w.op_ = Op::Product;
    w.lhs_ = std::make_shared<Weight>(*this);
    w.rhs_ = std::make_shared<Weight>(o);
    return w;
}

Weight Weight::inverse() const {
    if (op_ == Op::One) return one();
    if (op_ == Op::Inverse) return *lhs_;
    Weight w;
    w.op_ = Op::Inverse;
    w.lhs_ = std::make_shared<Weight>(*this);
    return w;
}

Real Weight::eval_raw(Real x1, Real x2, Real xi1, Real xi2) const {
    switch (op_) {
        case Op::One: return 1.0;
        case Op::Atom: return atom_eval(atom_, x1, x2, xi1, xi2);
        case Op::Product: return lhs_->eval_raw(x1, x2, xi1, xi2) * rhs_->eval_raw(x1, x2, xi1, xi2);
        case Op::Inverse: return 1.0 / lhs_->eval_raw(x1, x2, xi1, xi2);
    }
    return 1.0;
}

Real Weight::eval2(Real x1, Real x2, Real xi1, Real xi2) const {
    bool sat = false;
    return eval2(x1, x2, xi1, xi2, sat);
}

Real Weight::eval2(Real x1, Real x2, Real xi1, Real xi2, bool& saturated) const {
    Real v = eval_raw(x1, x2, xi1, xi2);
    if (!(v > 0.0) || !std::isfinite(v)) {
        saturated = true;
        v = std::isfinite(v) && v < 1.0 ? 1.0 / kSaturate : kSaturate;
    } else if (v > kSaturate) {
        saturated = true;
        v = kSaturate;
    } else if (v < 1.0 / kSaturate) {
        saturated = true;
        v = 1.0 / kSaturate;
    }
    return v;
}

Weight Weight::torsion() const {
    switch (op_) {
        case Op::One: return one();
        case Op::Atom: {
            WeightAtom b = atom_;
            if (atom_.kind == WeightAtom::Kind::BracketX)
                b.kind = WeightAtom::Kind::BracketXi;
            else if (atom_.kind == WeightAtom::Kind::BracketXi)
                b.kind = WeightAtom::Kind::BracketX;
            else if (atom_.kind == WeightAtom::Kind::User) {
                auto inner = atom_.user;
                UserWeightFn fn;
                fn.name = inner->name + "_T";
                fn.r = inner->rho;
                fn.rho = inner->r;
                fn.moderate_bound = inner->moderate_bound;
                fn.eval = [inner](Real x1, Real x2, Real xi1, Real xi2) {
                    return inner->eval(-xi1, -xi2, x1, x2);
                };
                b.user = std::make_shared<UserWeightFn>(std::move(fn));
            }
            return atom(std::move(b));
        }
        case Op::Product: return lhs_->torsion() * rhs_->torsion();
        case Op::Inverse: return lhs_->torsion().inverse();
    }
    return one();
}

void Weight::collect(std::vector<std::pair<WeightAtom, int>>& out, int sign) const {
    switch (op_) {
        case Op::One: return;
        case Op::Atom: out.emplace_back(atom_, sign); return;
        case Op::Product:
            lhs_->collect(out, sign);
            rhs_->collect(out, sign);
            return;
        case Op::Inverse: lhs_->collect(out, -sign); return;
    }
}

bool Weight::is_one() const {
    if (op_ == Op::One) return true;
    std::vector<std::pair<WeightAtom, int>> atoms;
    collect(atoms);
    return atoms.empty();
}

bool Weight::bracket_only() const {
    std::vector<std::pair<WeightAtom, int>> atoms;
    collect(atoms);
    for (const auto& [a, s] : atoms)
        if (a.kind == WeightAtom::Kind::User) return false;
    return true;
}

Real Weight::abs_exponent_sum() const {
    std::vector<std::pair<WeightAtom, int>> atoms;
    collect(atoms);
    Real sum = 0.0;
    for (const auto& [a, s] : atoms)
        if (a.kind != WeightAtom::Kind::User) sum += std::abs(a.exponent);
    return sum;
}

void Weight::net_exponents(Real& t, Real& s, Real& u) const {
    t = s = u = 0.0;
    std::vector<std::pair<WeightAtom, int>> atoms;
    collect(atoms);
    for (const auto& [a, sign] : atoms) {
        if (a.kind == WeightAtom::Kind::BracketX) t += sign * a.exponent;
        if (a.kind == WeightAtom::Kind::BracketXi) s += sign * a.exponent;
        if (a.kind == WeightAtom::Kind::BracketJoint) u += sign * a.exponent;
    }
}

std::string Weight::str() const {
    std::vector<std::pair<WeightAtom, int>> atoms;
    collect(atoms);
    if (atoms.empty()) return "1";
    std::ostringstream os;
    bool first = true;
    for (const auto& [a, sign] : atoms) {
        if (!first) os << "*";
        first = false;
        switch (a.kind) {
            case WeightAtom::Kind::BracketX: os << "bx^" << sign * a.exponent; break;
            case WeightAtom::Kind::BracketXi: os << "bxi^" << sign * a.exponent; break;
            case WeightAtom::Kind::BracketJoint: os << "bj^" << sign * a.exponent; break;
            case WeightAtom::Kind::User: os << a.user->name << (sign < 0 ? "^-1" : ""); break;
        }
    }
    return os.str();
}

WeightSequence joint_decay_sequence(int j_max) {
    WeightSequence ws;
    ws.id = "bj^-j";
    ws.j_max = j_max;
    ws.generator = [](int j) { return Weight::bracket_joint(-static_cast<Real>(j)); };
    return ws;
}

ModerateReport check_moderate(const Weight& w, const Weight& v, const GridSpec& grid,
                              int sample_budget) {
    ModerateReport rep;
    rep.threshold = std::pow(2.0, w.abs_exponent_sum());
    std::vector<std::pair<WeightAtom, int>> atoms;
    w.collect(atoms);
    for (const auto& [a, s] : atoms)
        if (a.kind == WeightAtom::Kind::User) rep.threshold *= a.user->moderate_bound;

    const Real L = grid.extent;
    const Real Xi = grid.dual_extent();
    auto ratio_at = [&](Real zx, Real zxi, Real wx, Real wxi) {
        const Real top = w.eval(zx + wx, zxi + wxi);
        const Real bot = w.eval(zx, zxi) * v.eval(wx, wxi);
        return bot > 0.0 ? top / bot : kSaturate;
    };

    // lattice pairs: decimated phase nodes against each other
    const int m = 8;
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            for (int c = 0; c < m; ++c)
                for (int e = 0; e < m; ++e) {
                    const Real zx = -L + (2.0 * L) * (a + 0.5) / m;
                    const Real zxi = -Xi + (2.0 * Xi) * (b + 0.5) / m;
                    const Real wx = -L + (2.0 * L) * (c + 0.5) / m;
                    const Real wxi = -Xi + (2.0 * Xi) * (e + 0.5) / m;
                    rep.max_ratio = std::max(rep.max_ratio, ratio_at(zx, zxi, wx, wxi));
                }

    std::mt19937_64 rng(0x5EED);
    for (int k = 0; k < sample_budget; ++k) {
        const Real zx = (2.0 * u01(rng) - 1.0) * L;
        const Real zxi = (2.0 * u01(rng) - 1.0) * Xi;
        const Real wx = (2.0 * u01(rng) - 1.0) * L;
        const Real wxi = (2.0 * u01(rng) - 1.0) * Xi;
        rep.max_ratio = std::max(rep.max_ratio, ratio_at(zx, zxi, wx, wxi));
    }
    rep.pass = rep.max_ratio <= rep.threshold;
    return rep;
}

namespace {

/// 4th-order central first difference, iterated for higher orders.
template <typename Fn>
Real fd_derivative(const Fn& f, Real x, int order, Real h) {
    if (order == 0) return f(x);
    auto g = [&](Real y) { return fd_derivative(f, y, order - 1, h); };
    return (-g(x + 2 * h) + 8 * g(x + h) - 8 * g(x - h) + g(x - 2 * h)) / (12 * h);
}

}  // namespace

PrrReport check_prr(const Weight& w, Real r, Real rho, int order, const GridSpec& grid) {
    if (r < 0 || r > 1 || rho < 0 || rho > 1) throw ContractError("check_prr: 0 <= r,rho <= 1");
    if (order < 0 || order > 4) throw ContractError("check_prr: order <= 4");
    PrrReport rep;
    const Real hx = grid.step();
    const Real hxi = grid.dual_step();
    const int m = std::min(grid.n_per_axis, grid.d == 1 ? 33 : 13);
    const Real L = grid.extent, Xi = grid.dual_extent();

    struct MIdx {
        int a1, a2;
        int total() const { return a1 + a2; }
    };
    std::vector<MIdx> midx;
    if (grid.d == 1) {
        for (int a = 0; a <= order; ++a) midx.push_back({a, 0});
    } else {
        for (int a1 = 0; a1 <= order; ++a1)
            for (int a2 = 0; a2 + a1 <= order; ++a2) midx.push_back({a1, a2});
    }

    const Real x2_fix = grid.d == 2 ? 0.35 * L : 0.0;
    const Real xi2_fix = grid.d == 2 ? -0.2 * Xi : 0.0;
    for (const auto& al : midx) {
        for (const auto& be : midx) {
            if (al.total() + be.total() > order) continue;
            Real sup = 0.0;
            for (int ix = 0; ix < m; ++ix)
                for (int ixi = 0; ixi < m; ++ixi) {
                    const Real x1 = -L + 2.0 * L * (ix + 0.5) / m;
                    const Real xi1 = -Xi + 2.0 * Xi * (ixi + 0.5) / m;
                    auto f_xi2 = [&](Real q) {
                        auto f_xi1 = [&](Real p) {
                            auto f_x2 = [&](Real y) {
                                auto f_x1 = [&](Real z) { return w.eval2(z, y, p, q); };
                                return fd_derivative(f_x1, x1, al.a1, hx);
                            };
                            return fd_derivative(f_x2, x2_fix, al.a2, hx);
                        };
                        return fd_derivative(f_xi1, xi1, be.a1, hxi);
                    };
                    const Real deriv = fd_derivative(f_xi2, xi2_fix, be.a2, hxi);
                    const Real base = w.eval2(x1, x2_fix, xi1, xi2_fix);
                    if (base <= 0.0) continue;
                    const Real fac = std::pow(bracket2(x1, x2_fix), r * al.total()) *
                                     std::pow(bracket2(xi1, xi2_fix), rho * be.total());
                    sup = std::max(sup, fac * std::abs(deriv) / base);
                }
            rep.seminorms.push_back({al.a1, al.a2, be.a1, be.a2, sup});
        }
    }
    rep.pass = true;
    for (const auto& e : rep.seminorms)
        if (!(e.value <= rep.bound)) rep.pass = false;
    return rep;
}

namespace {

struct WeightParser {
    const std::string& s;
    size_t pos = 0;

    explicit WeightParser(const std::string& text) : s(text) {}

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }

    bool eat(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    Real number() {
        skip_ws();
        size_t end = pos;
        if (end < s.size() && (s[end] == '+' || s[end] == '-')) ++end;
        while (end < s.size() &&
               (std::isdigit(static_cast<unsigned char>(s[end])) || s[end] == '.' || s[end] == 'e' ||
                s[end] == 'E' ||
                ((s[end] == '+' || s[end] == '-') && (s[end - 1] == 'e' || s[end - 1] == 'E'))))
            ++end;
        if (end == pos) throw ConfigError("weight literal: expected number at '" + s.substr(pos) + "'");
        Real v = std::stod(s.substr(pos, end - pos));
        pos = end;
        return v;
    }

    Weight term() {
        skip_ws();
        if (pos < s.size() && (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '.')) {
            Real v = number();
            if (v != 1.0) throw ConfigError("weight literal: only the constant 1 is allowed");
            return Weight::one();
        }
        size_t end = pos;
        while (end < s.size() && std::isalpha(static_cast<unsigned char>(s[end]))) ++end;
        const std::string name = s.substr(pos, end - pos);
        pos = end;
        Real expn = 1.0;
        if (eat('^')) expn = number();
        if (name == "bx") return Weight::bracket_x(expn);
        if (name == "bxi") return Weight::bracket_xi(expn);
        if (name == "bj") return Weight::bracket_joint(expn);
        throw ConfigError("weight literal: unknown atom '" + name + "'");
    }

    Weight parse() {
        Weight w = term();
        for (;;) {
            if (eat('*'))
                w = w * term();
            else if (eat('/'))
                w = w / term();
            else
                break;
        }
        skip_ws();
        if (pos != s.size()) throw ConfigError("weight literal: trailing input '" + s.substr(pos) + "'");
        return w;
    }
};

}  // namespace

Weight parse_weight(const std::string& text) { return WeightParser(text).parse(); }

}  // namespace wflab
