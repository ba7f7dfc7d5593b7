#pragma once

#include "fkswitch/generator.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace fkswitch {

/// Validation tolerances. Config files may override each value.
struct Tolerances {
    double generator_row_sum = 1e-12;
    double theta_relation = 1e-12;
    double certificate = 1e-12;
};

/// Mean-reverting log-price model with regime-dependent long-run mean,
/// volatility and discount rate; regime switching is driven by a CTMC
/// generator. Immutable after construction, safe to share across threads.
///
/// The per-regime long-run mean is tied to the rate and volatility by
///   theta(i) = rate(i) - sigma(i)^2 / (2 beta),
/// which the builder either derives or verifies.
class RegimeOUModel {
public:
    /// Validating constructor. When derive_theta is set, theta is computed
    /// from (rate, sigma, beta); a supplied theta is then cross-checked.
    /// Throws Error{BetaOutOfRange, NonPositiveSigma, NegativeRate,
    /// RelationViolated, ThetaRequired, SizeMismatch, NonPositiveHorizon}.
    static RegimeOUModel build(double beta, std::optional<std::vector<double>> theta,
                               std::vector<double> sigma, std::vector<double> rate,
                               double horizon, GeneratorMatrix generator, bool derive_theta,
                               const Tolerances& tol = {});

    /// Skips every invariant check. Diagnostics and tests only: lets callers
    /// build deliberately inconsistent models (e.g. to confirm that the
    /// supermartingale certificate rejects them).
    static RegimeOUModel unchecked(double beta, std::vector<double> theta,
                                   std::vector<double> sigma, std::vector<double> rate,
                                   double horizon, GeneratorMatrix generator);

    std::size_t regimes() const noexcept { return sigma_.size(); }
    double beta() const noexcept { return beta_; }
    double horizon() const noexcept { return horizon_; }
    double theta(std::size_t i) const { return theta_[i]; }
    double sigma(std::size_t i) const { return sigma_[i]; }
    double rate(std::size_t i) const { return rate_[i]; }
    const GeneratorMatrix& generator() const noexcept { return generator_; }
    double holding_rate(std::size_t i) const { return generator_.holding_rate(i); }

    double max_sigma() const;
    /// Standard deviation of the stationary law of the frozen-regime process.
    double stationary_std(std::size_t i) const;
    double max_stationary_std() const;

    /// Non-fatal validation notes (e.g. a zero discount rate).
    const std::vector<std::string>& warnings() const noexcept { return warnings_; }

private:
    RegimeOUModel(double beta, std::vector<double> theta, std::vector<double> sigma,
                  std::vector<double> rate, double horizon, GeneratorMatrix generator,
                  std::vector<std::string> warnings);

    double beta_;
    std::vector<double> theta_;
    std::vector<double> sigma_;
    std::vector<double> rate_;
    double horizon_;
    GeneratorMatrix generator_;
    std::vector<std::string> warnings_;
};

enum class PayoffKind { Call, Constant, BoundedCustom };

/// Terminal payoff phi(x, regime) of the log-price x. Call is unbounded;
/// Constant and BoundedCustom carry an explicit bound so the unit dampening
/// choice can be certified.
class PayoffSpec {
public:
    static PayoffSpec call(double strike);
    static PayoffSpec constant(double level);
    /// Piecewise-linear tabulated payoff, clamped outside the table range.
    /// All tabulated values must satisfy |y| <= bound.
    static PayoffSpec bounded_custom(std::vector<double> xs, std::vector<double> ys, double bound);

    double operator()(double x, std::size_t regime) const;

    PayoffKind kind() const noexcept { return kind_; }
    double strike() const noexcept { return strike_; }
    double level() const noexcept { return level_; }
    double bound() const noexcept { return bound_; }
    bool is_bounded() const noexcept { return kind_ != PayoffKind::Call; }

private:
    explicit PayoffSpec(PayoffKind kind) : kind_(kind) {}

    PayoffKind kind_;
    double strike_ = 0.0;
    double level_ = 0.0;
    double bound_ = 0.0;
    std::vector<double> xs_;
    std::vector<double> ys_;
};

enum class DampeningKind { Unit, OUCall };

/// Strictly nonzero scaling D(t, x) applied to the value surface so that
/// the scaled surface stays bounded. Unit is valid for bounded payoffs;
/// OUCall is the exponential factor exp(x e^{-beta (T-t)}) suited to the
/// call payoff under mean reversion.
struct DampeningSpec {
    DampeningKind kind = DampeningKind::Unit;

    static DampeningSpec unit() { return {DampeningKind::Unit}; }
    static DampeningSpec ou_call() { return {DampeningKind::OUCall}; }

    double value(const RegimeOUModel& model, double t, double x) const;
};

/// Evaluation point (t, x, regime) with a zero-based regime index.
/// t may equal the horizon, in which case every method reduces to the
/// terminal payoff.
struct PricingQuery {
    double t = 0.0;
    double x = 0.0;
    std::size_t regime = 0;

    /// Throws Error{RegimeOutOfRange, QueryOutOfRange}.
    static PricingQuery checked(double t, double x, std::size_t regime,
                                const RegimeOUModel& model);
};

/// Notes about a payoff/dampening pairing that cannot be certified
/// (empty when the pairing is sound).
std::vector<std::string> dampening_warnings(const PayoffSpec& payoff,
                                            const DampeningSpec& dampening);

}  // namespace fkswitch
