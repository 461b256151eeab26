#pragma once

#include "complag/euler_lagrange.hpp"
#include "complag/geometry.hpp"

#include <exception>
#include <iosfwd>
#include <span>

namespace complag {

/// Input layout of compiled functions: for each index i = 1..n the six slots
/// z, zb, zd, zbd, zdd, zbdd, then t.
int input_slot(Role role, int index);
inline int input_count(int dof) { return 6 * dof + 1; }

/// Expressions flattened to a deduplicated instruction tape with the system's
/// parameters baked in.  Immutable after construction.
class CompiledFunction {
public:
    /// Throws UnboundSymbol for symbols that are neither coordinates of
    /// indices 1..dof, t, nor parameters of the spec.
    CompiledFunction(const std::vector<Expression>& exprs, const SystemSpec& spec);

    std::size_t outputs() const noexcept { return outputs_.size(); }
    std::size_t tape_size() const noexcept { return tape_.size(); }
    int dof() const noexcept { return dof_; }

    /// inputs.size() must be input_count(dof); out.size() must be outputs().
    void evaluate(std::span<const Complex> inputs, std::span<Complex> out) const;
    std::vector<Complex> operator()(std::span<const Complex> inputs) const;

private:
    enum class Op : std::uint8_t { Constant, Input, Add, Mul, IntPow, Pow, Func };
    struct Instruction {
        Op op;
        Function function = Function::Sqrt;
        long long exponent = 0;
        Complex constant;
        int input = 0;
        std::uint32_t first = 0;  // into args_
        std::uint32_t count = 0;
    };

    int emit(const Expression& e, std::map<Expression, int, ExpressionLess>& seen, const SystemSpec& spec);

    int dof_ = 0;
    std::vector<Instruction> tape_;
    std::vector<int> args_;
    std::vector<int> outputs_;
};

/// Positions and velocities of the unbarred channel; the barred channel is
/// their conjugate.
struct State {
    double t = 0.0;
    std::vector<Complex> z;
    std::vector<Complex> zdot;
};

/// Both channels carried independently.
struct PhaseState {
    double t = 0.0;
    std::vector<Complex> z, zb, zdot, zbdot;
};

struct Accelerations {
    std::vector<Complex> zddot;
    std::vector<Complex> zbddot;
    double condition = 0.0;
    /// Largest |M*a - b| component: the residuals at the computed accelerations.
    double residual = 0.0;
};

/// Classical-mode equations of motion solved for the accelerations through
/// the velocity Hessian.
class LagrangianDynamics {
public:
    static constexpr double kConditionLimit = 1e12;
    static constexpr double kLocusGuard = 1e-9;

    explicit LagrangianDynamics(const SystemSpec& spec);

    const SystemSpec& spec() const noexcept { return spec_; }
    int dof() const noexcept { return spec_.dof; }
    const ELSystem& equations() const noexcept { return equations_; }
    /// M(a, b) = d R_a / d acc_b over residuals (R1_1..R1_n, R2_1..R2_n) and
    /// accelerations (zdd_1..zdd_n, zbdd_1..zbdd_n).
    const ExprMatrix& mass_matrix() const noexcept { return mass_; }

    /// Throws SingularLocus, SingularMassMatrix.
    Accelerations accelerations(const PhaseState& s) const;
    Accelerations accelerations(const State& s) const;

    /// Values of the declared loci; throws SingularLocus when one is within the guard.
    std::vector<Complex> check_loci(const PhaseState& s) const;
    std::vector<Complex> loci_values(const PhaseState& s) const;

    Complex classical_energy(const State& s) const;
    Complex paper_energy(const State& s) const;

    std::vector<Complex> inputs(const PhaseState& s, const Accelerations* acc = nullptr) const;

private:
    SystemSpec spec_;
    ELSystem equations_;
    ExprMatrix mass_;
    CompiledFunction system_;  // mass matrix entries (row-major), then -R(acc = 0)
    CompiledFunction loci_;
    CompiledFunction energies_;  // classical, paper
};

PhaseState to_phase(const State& s);

State rk4_step(const LagrangianDynamics& dyn, const State& s, double dt);
PhaseState rk4_step(const LagrangianDynamics& dyn, const PhaseState& s, double dt);

struct Trajectory {
    std::vector<State> states;
    std::vector<Complex> classical_energy;
    std::vector<Complex> paper_energy;
    double dt = 0.0;
    Mode mode = Mode::Classical;
    /// max_k |E_k - E_0| / |E_0| over the classical energy (absolute when E_0 = 0).
    double drift = 0.0;
    double max_residual = 0.0;

    void record(const LagrangianDynamics& dyn, const State& s);
};

/// Raised when integration stops early; carries what was integrated so far.
class IntegrationAborted : public Error {
public:
    IntegrationAborted(Trajectory partial, double t, std::exception_ptr cause, const std::string& what)
        : Error(what), partial_(std::move(partial)), t_(t), cause_(std::move(cause)) {}
    const Trajectory& partial() const noexcept { return partial_; }
    double time() const noexcept { return t_; }
    std::exception_ptr cause() const noexcept { return cause_; }

private:
    Trajectory partial_;
    double t_;
    std::exception_ptr cause_;
};

/// Fixed-step RK4 from s0 to t_end.  Besides the pointwise guard, a step is
/// rejected when a locus changes by a segment passing within the guard of 0.
/// Throws IntegrationAborted (cause SingularLocus or SingularMassMatrix) and
/// DomainError for non-positive dt or t_end <= s0.t.
Trajectory integrate(const LagrangianDynamics& dyn, const State& s0, double t_end, double dt);

std::vector<PhaseState> integrate_phase(const LagrangianDynamics& dyn, const PhaseState& s0, double t_end, double dt);

/// CSV header and rows with 17 significant digits.
void write_csv_header(std::ostream& os, int dof);
void write_csv_rows(std::ostream& os, const Trajectory& tr, std::size_t from = 0);

}  // namespace complag
