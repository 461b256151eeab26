#pragma once

#include "complag/calculus.hpp"
#include "complag/evaluate.hpp"
#include "complag/parser.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace complag {

/// Paper mode: R1 = I*d/dt(dL/dz) - dL/dz and R2 = I*d/dt(dL/dzd) + dL/dzd.
/// Classical mode: R1 = d/dt(dL/dzd) - dL/dz and R2 = d/dt(dL/dzbd) - dL/dzb.
enum class Mode { Paper, Classical };

std::string_view mode_name(Mode mode);
std::optional<Mode> parse_mode(std::string_view text);

struct ELSystem {
    Mode mode = Mode::Paper;
    int dof = 0;
    std::vector<Expression> first;   // R1_i
    std::vector<Expression> second;  // R2_i
    SystemSpec source;
};

/// Both throw OrderOverflow if the Lagrangian contains accelerations.
ELSystem derive_paper_mode(const SystemSpec& spec);
ELSystem derive_classical_mode(const SystemSpec& spec);
ELSystem derive(const SystemSpec& spec, Mode mode);

/// A built-in system together with transcribed printed forms of its
/// equations: dL/dz and dL/dzd (hinged rod: m*Q and m*W; central force: S and U).
struct ApplicationOracle {
    SystemSpec spec;
    std::string first_label;
    Expression first;
    std::string second_label;
    Expression second;
};

/// Hinged rod.  Q and W as printed, with A and B expanded in place.
ApplicationOracle application1_oracle();
/// Central force.  S and U as printed, with the square-root factor expanded in place.
ApplicationOracle application2_oracle();

struct ReconciliationReport {
    std::string label;
    double max_deviation = 0.0;
    Point argmax;
    int samples = 0;
    double tolerance = 0.0;
    bool match = false;
    std::vector<std::string> notes;

    std::string_view verdict() const { return match ? "match" : "divergence"; }
};

/// Randomized comparison of a derived expression against a transcribed one.
/// On divergence the notes list each additive term of the transcription at
/// the worst sample and the deviation obtained by flipping its sign.
/// Throws AllSamplesRejected.
ReconciliationReport reconcile(const std::string& label, const Expression& derived, const Expression& transcribed,
                               const SamplingDomain& domain, double tol, int samples = 100,
                               std::uint64_t seed = 12345);

/// Sampling domain for a system: parameters fixed to the file values,
/// its singular loci excluded, positions in the right half-plane.
SamplingDomain system_domain(const SystemSpec& spec);

/// Reconciliation of both printed forms for a built-in application system.
std::vector<ReconciliationReport> reconcile_application(const ApplicationOracle& oracle, double tol, int samples,
                                                        std::uint64_t seed);

}  // namespace complag
