#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fracheat/rearrange.hpp"
#include "fracheat/sampled.hpp"

namespace fracheat {

/// s -> [log(e + 1/s)]^alpha. Non-increasing in s for alpha >= 0.
struct LogWeight {
    double alpha = 0.0;
    double operator()(double s) const;
};

// int_a^b [log(e + 1/s)]^alpha ds, 0 <= a <= b.
double log_weight_integral(double alpha, double a, double b);

enum class NormFamily {
    FrakWeak,        // sup_s {w(s)^a int_0^s (f*)^q}^{1/q}
    Zygmund,         // (int_0^inf w(s)^a f*(s)^q ds)^{1/q}
    WeakZygmund,     // sup_s {w(s)^a s f*(s)^q}^{1/q}
    DoublestarWeak,  // sup_s {w(s)^a s f**(s)^q}^{1/q}
};

std::string to_string(NormFamily family);
NormFamily parse_norm_family(const std::string& name);

struct NormSpec {
    NormFamily family = NormFamily::FrakWeak;
    double q = 1.0;
    double alpha = 0.0;
    std::optional<double> rho;  // uniformly local radius, FrakWeak only

    void validate() const;
};

// All four families on a rearrangement; q = infinity returns f*(0) = ||f||_inf.
double frak_norm(const Rearrangement& r, double q, double alpha);
double zygmund_norm(const Rearrangement& r, double q, double alpha);
double weak_zygmund_norm(const Rearrangement& r, double q, double alpha);
double doublestar_norm(const Rearrangement& r, double q, double alpha);

double frak_norm(const SampledFunction& f, double q, double alpha);
double zygmund_norm(const SampledFunction& f, double q, double alpha);
double weak_zygmund_norm(const SampledFunction& f, double q, double alpha);
double doublestar_norm(const SampledFunction& f, double q, double alpha);

/// Lattice of ball centers for the uniformly local norm
/// |||f|||_{q,a;rho} = sup_z ||f chi_{B(z,rho)}||.
///
/// Centers are k * spacing on each axis (anchored at the origin) inside the
/// periodic box; spacing defaults to rho/2. Ball membership uses periodic
/// distance from the cell center. Precomputing the member lists lets the
/// solver reuse one lattice for every snapshot.
class BallLattice {
public:
    BallLattice(const GridSpec& grid, double rho, std::optional<double> spacing = std::nullopt);

    const GridSpec& grid() const { return grid_; }
    double rho() const { return rho_; }
    std::size_t centers() const { return members_.size(); }
    const std::vector<std::array<double, 2>>& center_points() const { return points_; }
    const std::vector<std::size_t>& members(std::size_t c) const { return members_[c]; }
    double max_ball_measure() const;

    // Ball-restricted frak norm maximized over centers.
    double norm(const SampledFunction& f, double q, double alpha) const;
    // Same, also returning the maximizing center index.
    std::pair<double, std::size_t> norm_with_center(const SampledFunction& f, double q,
                                                    double alpha) const;

private:
    GridSpec grid_;
    double rho_;
    std::vector<std::array<double, 2>> points_;
    std::vector<std::vector<std::size_t>> members_;
};

double ul_frak_norm(const SampledFunction& f, double q, double alpha, double rho);

double evaluate(const NormSpec& spec, const SampledFunction& f);

struct HolderCheck {
    double lhs = 0.0;    // ||f1 f2||_{1,alpha}
    double rhs = 0.0;    // ||f1||_{q1,alpha1} ||f2||_{q2,alpha2}
    double alpha = 0.0;  // alpha1/q1 + alpha2/q2
};

HolderCheck holder_product_check(const SampledFunction& f1, const SampledFunction& f2, double q1,
                                 double q2, double alpha1, double alpha2);

struct IdentityCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    double relative_gap() const;
};

// || |f|^r ||_{q,alpha} against ||f||_{rq,alpha}^r.
IdentityCheck power_identity_check(const SampledFunction& f, double r, double q, double alpha);

struct LogInterpolationCheck {
    double lhs = 0.0;             // |||f|||_{1,alpha;rho}
    double rhs = 0.0;             // [log(e+1/rho)]^{alpha-beta} |||f|||_{1,beta;rho}
    double rhs_ball = 0.0;        // same with the ball measure |B(z,rho)| in the log
    double empirical_constant = 0.0;  // lhs / rhs
};

LogInterpolationCheck log_interpolation(const SampledFunction& f, double alpha, double beta,
                                        double rho);

}  // namespace fracheat
