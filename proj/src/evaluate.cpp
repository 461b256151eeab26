#include "complag/evaluate.hpp"

#include "complag/algebra.hpp"
#include "complag/error.hpp"

#include <cmath>
#include <cstdio>
#include <unordered_map>

namespace complag {

namespace numeric {

Complex integer_power(Complex base, long long exponent) {
    if (exponent < 0) {
        if (base == Complex(0.0, 0.0)) throw DivisionByZero();
        return Complex(1.0, 0.0) / integer_power(base, -exponent);
    }
    Complex result(1.0, 0.0);
    while (exponent > 0) {
        if (exponent & 1) result *= base;
        exponent >>= 1;
        if (exponent) base *= base;
    }
    return result;
}

// Values on the negative real axis take arg = pi whatever the sign of their
// zero imaginary part, so raw negations agree with folded constants.
Complex principal(Complex z) {
    if (z.imag() == 0.0) z.imag(0.0);
    return z;
}

Complex power(Complex base, const Complex& exponent) {
    base = principal(base);
    if (exponent.imag() == 0.0) {
        double n = exponent.real();
        if (n == std::trunc(n) && std::abs(n) <= 1e6) return integer_power(base, static_cast<long long>(n));
        if (n == 0.5) return std::sqrt(base);
        if (n == -0.5) {
            if (base == Complex(0.0, 0.0)) throw DivisionByZero();
            return 1.0 / std::sqrt(base);
        }
    }
    if (base == Complex(0.0, 0.0)) {
        if (exponent.real() > 0.0) return {0.0, 0.0};
        throw DivisionByZero();
    }
    return std::exp(exponent * std::log(base));
}

Complex function(Function f, const Complex& x) {
    switch (f) {
        case Function::Sqrt: return std::sqrt(principal(x));
        case Function::Sin: return std::sin(x);
        case Function::Cos: return std::cos(x);
        case Function::Exp: return std::exp(x);
        case Function::Ln:
            if (x == Complex(0.0, 0.0)) throw DomainError("ln of 0");
            return std::log(principal(x));
    }
    return {};
}

}  // namespace numeric

namespace {

using EvalMemo = std::unordered_map<const void*, Complex>;

Complex eval_impl(const Expression& e, const Point& point, EvalMemo& memo) {
    if (auto it = memo.find(e.id()); it != memo.end()) return it->second;
    Complex v;
    switch (e.kind()) {
        case Kind::Constant: v = e.value().to_complex(); break;
        case Kind::ImaginaryUnit: v = {0.0, 1.0}; break;
        case Kind::Parameter:
        case Kind::Coordinate:
        case Kind::Time: {
            auto it = point.find(e.symbol());
            if (it == point.end()) throw UnboundSymbol(e.symbol().to_string());
            v = it->second;
            break;
        }
        case Kind::Sum:
            v = {0.0, 0.0};
            for (const auto& c : e.children()) v += eval_impl(c, point, memo);
            break;
        case Kind::Product:
            v = {1.0, 0.0};
            for (const auto& c : e.children()) v *= eval_impl(c, point, memo);
            break;
        case Kind::Power: {
            Complex base = eval_impl(e.child(0), point, memo);
            const Expression& exponent = e.child(1);
            if (exponent.is_integer() && exponent.value().re <= 1000000 && exponent.value().re >= -1000000) {
                v = numeric::integer_power(base, exponent.value().to_integer());
            } else {
                v = numeric::power(base, eval_impl(exponent, point, memo));
            }
            break;
        }
        case Kind::Quotient: {
            Complex den = eval_impl(e.child(1), point, memo);
            if (den == Complex(0.0, 0.0)) throw DivisionByZero();
            v = eval_impl(e.child(0), point, memo) / den;
            break;
        }
        case Kind::Negation: v = -eval_impl(e.child(0), point, memo); break;
        case Kind::Function: v = numeric::function(e.function(), eval_impl(e.child(0), point, memo)); break;
        case Kind::Conjugate: v = std::conj(eval_impl(e.child(0), point, memo)); break;
    }
    memo.emplace(e.id(), v);
    return v;
}

double draw(std::mt19937_64& rng, const Interval& interval) {
    std::uniform_real_distribution<double> dist(interval.lo, interval.hi);
    return dist(rng);
}

}  // namespace

Complex eval(const Expression& e, const Point& point) {
    EvalMemo memo;
    return eval_impl(e, point, memo);
}

std::string format_point(const Point& point) {
    std::string out;
    char buffer[96];
    for (const auto& [symbol, value] : point) {
        if (!out.empty()) out += ", ";
        std::snprintf(buffer, sizeof buffer, "%s=(%.17g,%.17g)", symbol.to_string().c_str(), value.real(),
                      value.imag());
        out += buffer;
    }
    return out;
}

Point SamplingDomain::draw(std::mt19937_64& rng, const std::set<std::string>& parameter_names) const {
    Point point;
    auto complex_draw = [&](const Interval& re, const Interval& im) {
        double a = complag::draw(rng, re);
        double b = complag::draw(rng, im);
        return Complex(a, b);
    };
    struct Family {
        Role unbarred, barred, real, imag;
        const Interval* re;
        const Interval* im;
    };
    const Family families[] = {
        {Role::Z, Role::Zbar, Role::X, Role::Y, &position_re, &position_im},
        {Role::Zdot, Role::Zbardot, Role::Xdot, Role::Ydot, &velocity_re, &velocity_im},
        {Role::Zddot, Role::Zbarddot, Role::Xddot, Role::Yddot, &acceleration_re, &acceleration_im},
    };
    for (int i = 1; i <= dof; ++i) {
        for (const auto& f : families) {
            Complex u = complex_draw(*f.re, *f.im);
            Complex b = real_slice ? std::conj(u) : complex_draw(*f.re, *f.im);
            point[Symbol::coordinate(f.unbarred, i)] = u;
            point[Symbol::coordinate(f.barred, i)] = b;
            // z = x + I*y and zb = x - I*y.
            point[Symbol::coordinate(f.real, i)] = (u + b) / 2.0;
            point[Symbol::coordinate(f.imag, i)] = (u - b) / Complex(0.0, 2.0);
        }
    }
    point[Symbol::time()] = {complag::draw(rng, time), 0.0};
    for (const auto& name : parameter_names) {
        auto it = parameters.find(name);
        double value = it != parameters.end() ? it->second : complag::draw(rng, parameter_range);
        point[Symbol::parameter(name)] = {value, 0.0};
    }
    return point;
}

bool SamplingDomain::admissible(const Point& point) const {
    for (const auto& locus : loci) {
        try {
            Complex v = eval(locus, point);
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()) || std::abs(v) < locus_guard) return false;
        } catch (const Error&) {
            return false;
        }
    }
    return true;
}

std::set<std::string> parameter_names(const std::vector<Expression>& exprs) {
    std::set<std::string> names;
    for (const auto& e : exprs) {
        for (const auto& s : free_symbols(e)) {
            if (s.is_parameter()) names.insert(s.name());
        }
    }
    return names;
}

namespace {

bool evaluates_finitely(const Expression& e, const Point& p) {
    try {
        Complex v = eval(e, p);
        return std::isfinite(v.real()) && std::isfinite(v.imag());
    } catch (const Error&) {
        return false;
    }
}

}  // namespace

std::vector<Point> sample_points(const SamplingDomain& domain, const std::vector<Expression>& exprs, int count,
                                 std::uint64_t seed) {
    std::vector<Expression> all = exprs;
    all.insert(all.end(), domain.loci.begin(), domain.loci.end());
    auto names = parameter_names(all);
    std::mt19937_64 rng(seed);
    std::vector<Point> points;
    long long budget = static_cast<long long>(count) * std::max(domain.retries_per_sample, 1);
    for (long long attempt = 0; attempt < budget && static_cast<int>(points.size()) < count; ++attempt) {
        Point p = domain.draw(rng, names);
        if (!domain.admissible(p)) continue;
        bool ok = true;
        for (const auto& e : exprs) ok = ok && evaluates_finitely(e, p);
        if (ok) points.push_back(std::move(p));
    }
    if (points.empty()) throw AllSamplesRejected("every sampled point was rejected (singular loci or evaluation errors)");
    return points;
}

NumericComparison equal_numeric(const Expression& e1, const Expression& e2, int trials, double tol,
                                const SamplingDomain& domain, std::uint64_t seed) {
    std::vector<Expression> all{e1, e2};
    all.insert(all.end(), domain.loci.begin(), domain.loci.end());
    auto names = parameter_names(all);
    std::mt19937_64 rng(seed);
    NumericComparison report;
    long long budget = static_cast<long long>(trials) * std::max(domain.retries_per_sample, 1);
    for (long long attempt = 0; attempt < budget && report.samples < trials; ++attempt) {
        Point p = domain.draw(rng, names);
        if (!domain.admissible(p)) {
            ++report.rejected;
            continue;
        }
        Complex a, b;
        try {
            a = eval(e1, p);
            b = eval(e2, p);
        } catch (const Error&) {
            ++report.rejected;
            continue;
        }
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag()) || !std::isfinite(b.real()) ||
            !std::isfinite(b.imag())) {
            ++report.rejected;
            continue;
        }
        double dev = relative_deviation(a, b);
        if (report.samples == 0 || dev > report.max_deviation) {
            report.max_deviation = dev;
            report.argmax = p;
        }
        ++report.samples;
    }
    if (report.samples == 0) throw AllSamplesRejected("every sampled point was rejected (singular loci or evaluation errors)");
    report.equal = report.max_deviation <= tol;
    return report;
}

}  // namespace complag
