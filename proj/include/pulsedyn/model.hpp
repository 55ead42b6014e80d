#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace pulsedyn {

// ---------------------------------------------------------------------------
// Parameters and reduction constants
// ---------------------------------------------------------------------------

struct ModelParams {
    double tau = 0.17;       // time constant of the u-equation
    double D = 1.0;          // diffusion coefficient of v
    double delta0 = 0.001;   // baseline asymmetry, 0 <= delta0 < 1/2
    double epsilon = 0.05;   // interface width (full PDE tier only)
};

// Throws Error("invalid-parameter") if the basic invariants fail.
void validate(const ModelParams& p);

// Closed-form constants of the interface reduction. All fields except h0 and
// g3_tilde depend on D alone.
struct DerivedCoefficients {
    double m0 = 0;        // 3/(16 sqrt(D))
    double tau_c = 0;     // 1/(4 sqrt(2D))
    double g3 = 0;        // 1/(32 D^(3/2))
    double G0 = 0;        // 1/2
    double G1 = 0;        // 1/(4 sqrt(D))
    double phi0 = 0;      // 1/sqrt(D)
    double phi1 = 0;      // 1/(2D)
    double phi2 = 0;      // 1/(8 D sqrt(D))
    double h0 = 0;        // -sqrt(D) log(2 delta0)
    double g3_tilde = 0;  // cubic correction constant at h0

    // D-only constants; h0 and g3_tilde are NaN. For delta0 = 0 runs.
    static DerivedCoefficients base(double D);
};

// Full set including h0 and g3_tilde. Throws Error("degenerate-baseline")
// when delta0 == 0 (h0 diverges).
DerivedCoefficients derive_coefficients(const ModelParams& p);

// phi(r) = sqrt(r^2 + 4D)
inline double phi_kin(double r, double D) { return std::sqrt(r * r + 4.0 * D); }

// Phi(r) = (r + phi(r)) / (2D); series phi0 + phi1 r + phi2 r^2 + ...
inline double Phi_kin(double r, double D) { return (r + phi_kin(r, D)) / (2.0 * D); }

struct Prefactors {
    double m;  // 6 D^2 / phi^5
    double M;  // 6 D^2/phi^5 + 3 D h/phi^4 + h^2/(2 phi^3)
    double g;  // -sqrt(2) tau r + r/(2 phi)
    double G;  // (r + phi) / (2 phi)
};

Prefactors prefactors(double r, double h, const ModelParams& p);

// ---------------------------------------------------------------------------
// Heterogeneity profiles delta(x)
// ---------------------------------------------------------------------------

struct ConstantHet {};

struct SmoothBump {
    double eps0 = 0;   // bump height
    double d0 = 10;    // bump width
    double gamma = 100; // interface steepness
    double xc = 0;     // bump center
};

struct SharpBump {
    double eps0 = 0;
    double d0 = 10;
    double xc = 0;
};

struct SquareWell {
    double eps1 = 0;   // shoulder height
    double eps2 = 0;   // well depth (negative for a well)
    double d0 = 10;    // inner width
    double d1 = 30;    // shoulder width
    double xc = 0;
};

struct Tabulated {
    std::vector<double> x;  // strictly increasing
    std::vector<double> d;  // delta samples at x
};

using Heterogeneity = std::variant<ConstantHet, SmoothBump, SharpBump, SquareWell, Tabulated>;

// delta(x) for the given profile (baseline delta0 from p).
double het_delta(const Heterogeneity& het, const ModelParams& p, double x);

// Positions where delta(x) changes value (bump/well edges), ascending.
std::vector<double> het_edges(const Heterogeneity& het);

// [min, max] of the support of delta(x) - delta0; nullopt for ConstantHet.
std::optional<std::pair<double, double>> het_support(const Heterogeneity& het);

// Center coordinate (xc where present, 0 otherwise).
double het_center(const Heterogeneity& het);

std::string het_name(const Heterogeneity& het);

// ---------------------------------------------------------------------------
// Diffusive response Delta0(x):  D Delta0'' - Delta0 + delta = 0
// ---------------------------------------------------------------------------

// Response of a unit-height box on [a, b]: continuous, C^1, -> 0 at infinity.
double box_response(double x, double a, double b, double D);

class ResponseProfile {
public:
    enum class Provenance { Analytic, Numeric };

    struct BoxTerm {
        double height, a, b;
    };

    static ResponseProfile constant(double delta0);
    static ResponseProfile boxes(double delta0, std::vector<BoxTerm> terms, double D);
    static ResponseProfile grid(double x0, double dx, std::vector<double> values, double delta0);

    double operator()(double x) const;
    Provenance provenance() const { return provenance_; }
    double far_field() const { return delta0_; }

private:
    enum class Kind { Constant, Boxes, Grid };

    Kind kind_ = Kind::Constant;
    Provenance provenance_ = Provenance::Analytic;
    double delta0_ = 0;
    double D_ = 1;
    std::vector<BoxTerm> terms_;
    double x0_ = 0, dx_ = 1;
    std::vector<double> values_;
};

// Closed-form response for Constant / SharpBump / SquareWell.
// Throws Error("use-response-numeric") for SmoothBump / Tabulated.
ResponseProfile response_analytic(const Heterogeneity& het, const ModelParams& p);

// Finite-difference solve of the response equation on [x_lo, x_hi] with
// Dirichlet far-field values delta0, second-order central differences.
// Throws Error("far-field-violation") when the response has not decayed to
// delta0 (within 1e-6) one diffusion length inside the boundary.
ResponseProfile response_numeric(const Heterogeneity& het, const ModelParams& p,
                                 double x_lo, double x_hi, int grid_n);

// [support - 12 sqrt(D), support + 12 sqrt(D)]; centered fallback for
// unsupported profiles.
std::pair<double, double> default_response_domain(const Heterogeneity& het, const ModelParams& p);

} // namespace pulsedyn
