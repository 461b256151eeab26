#include "complag/dynamics.hpp"

#include "complag/error.hpp"

#include <Eigen/LU>

#include <cmath>
#include <cstdio>
#include <ostream>

namespace complag {

namespace {

int role_offset(Role r) {
    switch (r) {
        case Role::Z: return 0;
        case Role::Zbar: return 1;
        case Role::Zdot: return 2;
        case Role::Zbardot: return 3;
        case Role::Zddot: return 4;
        case Role::Zbarddot: return 5;
        default: return -1;
    }
}

ExprMatrix build_mass(const ELSystem& eq) {
    const int n = eq.dof;
    std::vector<Expression> residuals = eq.first;
    residuals.insert(residuals.end(), eq.second.begin(), eq.second.end());
    ExprMatrix M(2 * n, 2 * n);
    for (int a = 0; a < 2 * n; ++a) {
        for (int j = 0; j < n; ++j) {
            M(a, j) = partial(residuals[a], Symbol::coordinate(Role::Zddot, j + 1));
            M(a, n + j) = partial(residuals[a], Symbol::coordinate(Role::Zbarddot, j + 1));
        }
    }
    return M;
}

std::vector<Expression> system_expressions(const ExprMatrix& M, const ELSystem& eq) {
    const int n = eq.dof;
    std::vector<Expression> out;
    for (int a = 0; a < 2 * n; ++a) {
        for (int b = 0; b < 2 * n; ++b) out.push_back(M(a, b));
    }
    Binding rest;
    for (int j = 1; j <= n; ++j) {
        rest[Symbol::coordinate(Role::Zddot, j)] = Expression();
        rest[Symbol::coordinate(Role::Zbarddot, j)] = Expression();
    }
    for (const auto& r : eq.first) out.push_back(-substitute(r, rest));
    for (const auto& r : eq.second) out.push_back(-substitute(r, rest));
    return out;
}

std::string at_time(double t) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "at t=%.17g", t);
    return buf;
}

double segment_distance(Complex v0, Complex v1) {
    Complex d = v1 - v0;
    double len2 = std::norm(d);
    if (len2 == 0.0) return std::abs(v0);
    double u = std::clamp(-(std::conj(v0) * d).real() / len2, 0.0, 1.0);
    return std::abs(v0 + u * d);
}

// Runs f, re-raising guard failures with the stage and time attached.
template <class F>
auto staged(int stage, double t, F&& f) {
    try {
        return f();
    } catch (const SingularLocus& e) {
        throw SingularLocus(e.locus(), "(rk4 stage " + std::to_string(stage) + " " + at_time(t) + ")");
    } catch (const SingularMassMatrix& e) {
        throw SingularMassMatrix(e.condition(), "(rk4 stage " + std::to_string(stage) + " " + at_time(t) + ")");
    }
}

void axpy(std::vector<Complex>& out, const std::vector<Complex>& x, double h, const std::vector<Complex>& d) {
    out.resize(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) out[k] = x[k] + h * d[k];
}

}  // namespace

int input_slot(Role role, int index) { return 6 * (index - 1) + role_offset(role); }

CompiledFunction::CompiledFunction(const std::vector<Expression>& exprs, const SystemSpec& spec) : dof_(spec.dof) {
    std::map<Expression, int, ExpressionLess> seen;
    for (const auto& e : exprs) outputs_.push_back(emit(simplify(e), seen, spec));
}

int CompiledFunction::emit(const Expression& e, std::map<Expression, int, ExpressionLess>& seen,
                           const SystemSpec& spec) {
    if (auto it = seen.find(e); it != seen.end()) return it->second;
    Instruction ins{};
    switch (e.kind()) {
        case Kind::Constant:
            ins.op = Op::Constant;
            ins.constant = e.value().to_complex();
            break;
        case Kind::Parameter: {
            auto p = spec.parameters.find(e.symbol().name());
            if (p == spec.parameters.end()) throw UnboundSymbol(e.symbol().name());
            ins.op = Op::Constant;
            ins.constant = p->second;
            break;
        }
        case Kind::Coordinate: {
            const Symbol& s = e.symbol();
            if (role_offset(s.role()) < 0 || s.index() < 1 || s.index() > dof_) throw UnboundSymbol(s.to_string());
            ins.op = Op::Input;
            ins.input = input_slot(s.role(), s.index());
            break;
        }
        case Kind::Time:
            ins.op = Op::Input;
            ins.input = 6 * dof_;
            break;
        case Kind::Sum:
        case Kind::Product: {
            std::vector<int> args;
            for (const auto& c : e.children()) args.push_back(emit(c, seen, spec));
            ins.op = e.kind() == Kind::Sum ? Op::Add : Op::Mul;
            ins.first = static_cast<std::uint32_t>(args_.size());
            ins.count = static_cast<std::uint32_t>(args.size());
            args_.insert(args_.end(), args.begin(), args.end());
            break;
        }
        case Kind::Power: {
            const Expression& ex = e.child(1);
            std::vector<int> args{emit(e.child(0), seen, spec)};
            if (ex.is_integer()) {
                ins.op = Op::IntPow;
                ins.exponent = ex.value().to_integer();
            } else {
                ins.op = Op::Pow;
                args.push_back(emit(ex, seen, spec));
            }
            ins.first = static_cast<std::uint32_t>(args_.size());
            ins.count = static_cast<std::uint32_t>(args.size());
            args_.insert(args_.end(), args.begin(), args.end());
            break;
        }
        case Kind::Function: {
            int arg = emit(e.child(0), seen, spec);
            ins.op = Op::Func;
            ins.function = e.function();
            ins.first = static_cast<std::uint32_t>(args_.size());
            ins.count = 1;
            args_.push_back(arg);
            break;
        }
        default: return emit(simplify(e), seen, spec);
    }
    tape_.push_back(ins);
    int reg = static_cast<int>(tape_.size()) - 1;
    seen.emplace(e, reg);
    return reg;
}

void CompiledFunction::evaluate(std::span<const Complex> inputs, std::span<Complex> out) const {
    if (inputs.size() != static_cast<std::size_t>(input_count(dof_)) || out.size() != outputs_.size()) {
        throw DimensionMismatch("compiled function called with the wrong number of values");
    }
    std::vector<Complex> reg(tape_.size());
    for (std::size_t k = 0; k < tape_.size(); ++k) {
        const Instruction& ins = tape_[k];
        const int* a = args_.data() + ins.first;
        switch (ins.op) {
            case Op::Constant: reg[k] = ins.constant; break;
            case Op::Input: reg[k] = inputs[ins.input]; break;
            case Op::Add: {
                Complex acc = 0.0;
                for (std::uint32_t j = 0; j < ins.count; ++j) acc += reg[a[j]];
                reg[k] = acc;
                break;
            }
            case Op::Mul: {
                Complex acc = 1.0;
                for (std::uint32_t j = 0; j < ins.count; ++j) acc *= reg[a[j]];
                reg[k] = acc;
                break;
            }
            case Op::IntPow: reg[k] = numeric::integer_power(reg[a[0]], ins.exponent); break;
            case Op::Pow: reg[k] = numeric::power(reg[a[0]], reg[a[1]]); break;
            case Op::Func: reg[k] = numeric::function(ins.function, reg[a[0]]); break;
        }
    }
    for (std::size_t k = 0; k < outputs_.size(); ++k) out[k] = reg[outputs_[k]];
}

std::vector<Complex> CompiledFunction::operator()(std::span<const Complex> inputs) const {
    std::vector<Complex> out(outputs_.size());
    evaluate(inputs, out);
    return out;
}

LagrangianDynamics::LagrangianDynamics(const SystemSpec& spec)
    : spec_(spec),
      equations_(derive_classical_mode(spec)),
      mass_(build_mass(equations_)),
      system_(system_expressions(mass_, equations_), spec),
      loci_(spec.locus_expressions(), spec),
      energies_({complag::classical_energy(spec.lagrangian, spec.dof), complag::paper_energy(spec.lagrangian, spec.dof)},
                spec) {}

std::vector<Complex> LagrangianDynamics::inputs(const PhaseState& s, const Accelerations* acc) const {
    std::vector<Complex> in(input_count(dof()), 0.0);
    for (int i = 1; i <= dof(); ++i) {
        in[input_slot(Role::Z, i)] = s.z[i - 1];
        in[input_slot(Role::Zbar, i)] = s.zb[i - 1];
        in[input_slot(Role::Zdot, i)] = s.zdot[i - 1];
        in[input_slot(Role::Zbardot, i)] = s.zbdot[i - 1];
        if (acc) {
            in[input_slot(Role::Zddot, i)] = acc->zddot[i - 1];
            in[input_slot(Role::Zbarddot, i)] = acc->zbddot[i - 1];
        }
    }
    in[6 * dof()] = s.t;
    return in;
}

std::vector<Complex> LagrangianDynamics::loci_values(const PhaseState& s) const { return loci_(inputs(s)); }

std::vector<Complex> LagrangianDynamics::check_loci(const PhaseState& s) const {
    std::vector<Complex> values;
    try {
        values = loci_values(s);
    } catch (const Error&) {
        values.assign(spec_.singular.size(), Complex(std::nan(""), 0));
    }
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (!(std::abs(values[k]) >= kLocusGuard)) throw SingularLocus(spec_.singular[k].name, at_time(s.t));
    }
    return values;
}

Accelerations LagrangianDynamics::accelerations(const PhaseState& s) const {
    check_loci(s);
    const int n = dof();
    const int m = 2 * n;
    std::vector<Complex> v = system_(inputs(s));
    Eigen::MatrixXcd M(m, m);
    Eigen::VectorXcd b(m);
    for (int a = 0; a < m; ++a) {
        for (int c = 0; c < m; ++c) M(a, c) = v[a * m + c];
        b(a) = v[m * m + a];
    }
    // Real 2m x 2m form of the complex system.
    Eigen::MatrixXd A(2 * m, 2 * m);
    A << M.real(), -M.imag(), M.imag(), M.real();
    Eigen::VectorXd rhs(2 * m);
    rhs << b.real(), b.imag();
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    double rcond = lu.rcond();
    double condition = rcond > 0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
    if (!(condition <= kConditionLimit)) throw SingularMassMatrix(condition, at_time(s.t));
    Eigen::VectorXd x = lu.solve(rhs);
    Eigen::VectorXcd a(m);
    for (int k = 0; k < m; ++k) a(k) = Complex(x(k), x(m + k));

    Accelerations out;
    out.condition = condition;
    out.residual = (M * a - b).cwiseAbs().maxCoeff();
    for (int i = 0; i < n; ++i) {
        out.zddot.push_back(a(i));
        out.zbddot.push_back(a(n + i));
    }
    return out;
}

Accelerations LagrangianDynamics::accelerations(const State& s) const { return accelerations(to_phase(s)); }

Complex LagrangianDynamics::classical_energy(const State& s) const { return energies_(inputs(to_phase(s)))[0]; }
Complex LagrangianDynamics::paper_energy(const State& s) const { return energies_(inputs(to_phase(s)))[1]; }

PhaseState to_phase(const State& s) {
    PhaseState p{s.t, s.z, {}, s.zdot, {}};
    for (const auto& z : s.z) p.zb.push_back(std::conj(z));
    for (const auto& zd : s.zdot) p.zbdot.push_back(std::conj(zd));
    return p;
}

State rk4_step(const LagrangianDynamics& dyn, const State& s, double dt) {
    auto f = [&](int stage, const State& x) {
        return staged(stage, x.t, [&] { return dyn.accelerations(x).zddot; });
    };
    State s2, s3, s4;
    auto a1 = f(1, s);
    const auto& v1 = s.zdot;

    s2.t = s.t + dt / 2;
    axpy(s2.z, s.z, dt / 2, v1);
    axpy(s2.zdot, s.zdot, dt / 2, a1);
    auto a2 = f(2, s2);
    const auto& v2 = s2.zdot;

    s3.t = s.t + dt / 2;
    axpy(s3.z, s.z, dt / 2, v2);
    axpy(s3.zdot, s.zdot, dt / 2, a2);
    auto a3 = f(3, s3);
    const auto& v3 = s3.zdot;

    s4.t = s.t + dt;
    axpy(s4.z, s.z, dt, v3);
    axpy(s4.zdot, s.zdot, dt, a3);
    auto a4 = f(4, s4);
    const auto& v4 = s4.zdot;

    State out;
    out.t = s.t + dt;
    for (std::size_t k = 0; k < s.z.size(); ++k) {
        out.z.push_back(s.z[k] + dt / 6 * (v1[k] + 2.0 * v2[k] + 2.0 * v3[k] + v4[k]));
        out.zdot.push_back(s.zdot[k] + dt / 6 * (a1[k] + 2.0 * a2[k] + 2.0 * a3[k] + a4[k]));
    }
    return out;
}

PhaseState rk4_step(const LagrangianDynamics& dyn, const PhaseState& s, double dt) {
    // Flatten (z, zb, zd, zbd) and integrate all four channels.
    auto derivative = [&](int stage, const PhaseState& x) {
        Accelerations a = staged(stage, x.t, [&] { return dyn.accelerations(x); });
        std::vector<Complex> d;
        d.insert(d.end(), x.zdot.begin(), x.zdot.end());
        d.insert(d.end(), x.zbdot.begin(), x.zbdot.end());
        d.insert(d.end(), a.zddot.begin(), a.zddot.end());
        d.insert(d.end(), a.zbddot.begin(), a.zbddot.end());
        return d;
    };
    auto flatten = [](const PhaseState& x) {
        std::vector<Complex> y = x.z;
        y.insert(y.end(), x.zb.begin(), x.zb.end());
        y.insert(y.end(), x.zdot.begin(), x.zdot.end());
        y.insert(y.end(), x.zbdot.begin(), x.zbdot.end());
        return y;
    };
    const std::size_t n = s.z.size();
    auto unflatten = [n](double t, const std::vector<Complex>& y) {
        PhaseState x;
        x.t = t;
        x.z.assign(y.begin(), y.begin() + n);
        x.zb.assign(y.begin() + n, y.begin() + 2 * n);
        x.zdot.assign(y.begin() + 2 * n, y.begin() + 3 * n);
        x.zbdot.assign(y.begin() + 3 * n, y.end());
        return x;
    };
    std::vector<Complex> y = flatten(s), tmp;
    auto k1 = derivative(1, s);
    axpy(tmp, y, dt / 2, k1);
    auto k2 = derivative(2, unflatten(s.t + dt / 2, tmp));
    axpy(tmp, y, dt / 2, k2);
    auto k3 = derivative(3, unflatten(s.t + dt / 2, tmp));
    axpy(tmp, y, dt, k3);
    auto k4 = derivative(4, unflatten(s.t + dt, tmp));
    for (std::size_t k = 0; k < y.size(); ++k) y[k] += dt / 6 * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
    return unflatten(s.t + dt, y);
}

void Trajectory::record(const LagrangianDynamics& dyn, const State& s) {
    Accelerations a = dyn.accelerations(s);
    max_residual = std::max(max_residual, a.residual);
    states.push_back(s);
    classical_energy.push_back(dyn.classical_energy(s));
    paper_energy.push_back(dyn.paper_energy(s));
    Complex e0 = classical_energy.front();
    double scale = std::abs(e0) > 0 ? std::abs(e0) : 1.0;
    drift = std::max(drift, std::abs(classical_energy.back() - e0) / scale);
}

namespace {

void validate_span(double t0, double t_end, double dt) {
    if (!(dt > 0) || !std::isfinite(dt)) throw DomainError("dt must be positive");
    if (!(t_end > t0)) throw DomainError("t_end must be after the initial time");
}

long long step_count(double t0, double t_end, double dt) {
    return static_cast<long long>(std::ceil((t_end - t0) / dt - 1e-9));
}

}  // namespace

Trajectory integrate(const LagrangianDynamics& dyn, const State& s0, double t_end, double dt) {
    validate_span(s0.t, t_end, dt);
    Trajectory tr;
    tr.dt = dt;
    tr.mode = Mode::Classical;
    State s = s0;
    try {
        tr.record(dyn, s);
        std::vector<Complex> before = dyn.loci_values(to_phase(s));
        const long long steps = step_count(s0.t, t_end, dt);
        for (long long k = 1; k <= steps; ++k) {
            double t_next = k == steps ? t_end : s0.t + static_cast<double>(k) * dt;
            State next = rk4_step(dyn, s, t_next - s.t);
            next.t = t_next;
            std::vector<Complex> after = dyn.check_loci(to_phase(next));
            for (std::size_t l = 0; l < after.size(); ++l) {
                if (segment_distance(before[l], after[l]) < LagrangianDynamics::kLocusGuard) {
                    char buf[96];
                    std::snprintf(buf, sizeof buf, "(crossed between t=%.17g and t=%.17g)", s.t, t_next);
                    throw SingularLocus(dyn.spec().singular[l].name, buf);
                }
            }
            tr.record(dyn, next);
            s = std::move(next);
            before = std::move(after);
        }
    } catch (const Error& e) {
        double t = s.t;
        throw IntegrationAborted(std::move(tr), t, std::current_exception(), e.what());
    }
    return tr;
}

std::vector<PhaseState> integrate_phase(const LagrangianDynamics& dyn, const PhaseState& s0, double t_end,
                                        double dt) {
    validate_span(s0.t, t_end, dt);
    std::vector<PhaseState> out{s0};
    const long long steps = step_count(s0.t, t_end, dt);
    for (long long k = 1; k <= steps; ++k) {
        double t_next = k == steps ? t_end : s0.t + static_cast<double>(k) * dt;
        PhaseState next = rk4_step(dyn, out.back(), t_next - out.back().t);
        next.t = t_next;
        out.push_back(std::move(next));
    }
    return out;
}

void write_csv_header(std::ostream& os, int dof) {
    os << "t";
    for (int i = 1; i <= dof; ++i) {
        os << ",re_z" << i << ",im_z" << i << ",re_zd" << i << ",im_zd" << i;
    }
    os << ",re_E,im_E,re_EL_paper,im_EL_paper\n";
}

void write_csv_rows(std::ostream& os, const Trajectory& tr, std::size_t from) {
    char buf[64];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof buf, ",%.17g", v);
        os << buf;
    };
    for (std::size_t k = from; k < tr.states.size(); ++k) {
        const State& s = tr.states[k];
        std::snprintf(buf, sizeof buf, "%.17g", s.t);
        os << buf;
        for (std::size_t i = 0; i < s.z.size(); ++i) {
            put(s.z[i].real());
            put(s.z[i].imag());
            put(s.zdot[i].real());
            put(s.zdot[i].imag());
        }
        put(tr.classical_energy[k].real());
        put(tr.classical_energy[k].imag());
        put(tr.paper_energy[k].real());
        put(tr.paper_energy[k].imag());
        os << "\n";
    }
}

}  // namespace complag
