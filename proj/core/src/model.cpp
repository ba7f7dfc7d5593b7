#include "fkswitch/model.hpp"

#include "fkswitch/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fkswitch {

RegimeOUModel::RegimeOUModel(double beta, std::vector<double> theta, std::vector<double> sigma,
                             std::vector<double> rate, double horizon, GeneratorMatrix generator,
                             std::vector<std::string> warnings)
    : beta_(beta),
      theta_(std::move(theta)),
      sigma_(std::move(sigma)),
      rate_(std::move(rate)),
      horizon_(horizon),
      generator_(std::move(generator)),
      warnings_(std::move(warnings)) {}

RegimeOUModel RegimeOUModel::build(double beta, std::optional<std::vector<double>> theta,
                                   std::vector<double> sigma, std::vector<double> rate,
                                   double horizon, GeneratorMatrix generator, bool derive_theta,
                                   const Tolerances& tol) {
    const std::size_t m = generator.size();
    if (sigma.size() != m || rate.size() != m || (theta && theta->size() != m)) {
        throw_config("SizeMismatch", "per-regime parameter lists must match the generator size " +
                                         std::to_string(m));
    }
    if (!(beta > 0.0) || beta > 1.0) {
        throw_config("BetaOutOfRange",
                     "beta = " + std::to_string(beta) + " outside (0, 1]");
    }
    if (!(horizon > 0.0)) {
        throw_config("NonPositiveHorizon", "horizon = " + std::to_string(horizon));
    }

    std::vector<std::string> warnings;
    for (std::size_t i = 0; i < m; ++i) {
        if (!(sigma[i] > 0.0)) {
            throw_config("NonPositiveSigma", "sigma(" + std::to_string(i + 1) + ") = " +
                                                 std::to_string(sigma[i]));
        }
        if (rate[i] < 0.0) {
            throw_config("NegativeRate", "r(" + std::to_string(i + 1) + ") = " +
                                             std::to_string(rate[i]));
        }
        if (rate[i] == 0.0) {
            warnings.push_back("r(" + std::to_string(i + 1) +
                               ") = 0: dampening certificate may fail for unbounded payoffs");
        }
    }

    std::vector<double> implied(m);
    for (std::size_t i = 0; i < m; ++i) {
        implied[i] = rate[i] - sigma[i] * sigma[i] / (2.0 * beta);
    }

    std::vector<double> resolved;
    if (derive_theta) {
        resolved = implied;
        if (theta) {
            for (std::size_t i = 0; i < m; ++i) {
                if (std::abs((*theta)[i] - implied[i]) > tol.theta_relation) {
                    throw_config("RelationViolated",
                                 "supplied theta(" + std::to_string(i + 1) + ") = " +
                                     std::to_string((*theta)[i]) + " but derivation gives " +
                                     std::to_string(implied[i]));
                }
            }
        }
    } else {
        if (!theta) {
            throw_config("ThetaRequired", "theta list required unless derive_theta is set");
        }
        for (std::size_t i = 0; i < m; ++i) {
            if (std::abs((*theta)[i] - implied[i]) > tol.theta_relation) {
                throw_config("RelationViolated",
                             "theta(" + std::to_string(i + 1) + ") = " +
                                 std::to_string((*theta)[i]) + " violates r - sigma^2/(2 beta) = " +
                                 std::to_string(implied[i]));
            }
        }
        resolved = *theta;
    }

    return RegimeOUModel(beta, std::move(resolved), std::move(sigma), std::move(rate), horizon,
                         std::move(generator), std::move(warnings));
}

RegimeOUModel RegimeOUModel::unchecked(double beta, std::vector<double> theta,
                                       std::vector<double> sigma, std::vector<double> rate,
                                       double horizon, GeneratorMatrix generator) {
    return RegimeOUModel(beta, std::move(theta), std::move(sigma), std::move(rate), horizon,
                         std::move(generator), {"unchecked model: invariants not verified"});
}

double RegimeOUModel::max_sigma() const {
    return *std::max_element(sigma_.begin(), sigma_.end());
}

double RegimeOUModel::stationary_std(std::size_t i) const {
    return sigma_[i] / std::sqrt(2.0 * beta_);
}

double RegimeOUModel::max_stationary_std() const {
    return max_sigma() / std::sqrt(2.0 * beta_);
}

PayoffSpec PayoffSpec::call(double strike) {
    if (!(strike > 0.0)) {
        throw_config("StrikeNonPositive", "strike = " + std::to_string(strike));
    }
    PayoffSpec spec(PayoffKind::Call);
    spec.strike_ = strike;
    return spec;
}

PayoffSpec PayoffSpec::constant(double level) {
    PayoffSpec spec(PayoffKind::Constant);
    spec.level_ = level;
    spec.bound_ = std::abs(level);
    return spec;
}

PayoffSpec PayoffSpec::bounded_custom(std::vector<double> xs, std::vector<double> ys,
                                      double bound) {
    if (xs.size() < 2 || xs.size() != ys.size()) {
        throw_config("CustomTableInvalid", "need at least two (x, y) pairs of equal length");
    }
    for (std::size_t k = 1; k < xs.size(); ++k) {
        if (!(xs[k] > xs[k - 1])) {
            throw_config("CustomTableInvalid", "x values must be strictly increasing");
        }
    }
    if (!(bound >= 0.0) || !std::isfinite(bound)) {
        throw_config("CustomTableInvalid", "bound must be finite and nonnegative");
    }
    for (double y : ys) {
        if (std::abs(y) > bound) {
            throw_config("CustomTableInvalid",
                         "tabulated value " + std::to_string(y) + " exceeds declared bound " +
                             std::to_string(bound));
        }
    }
    PayoffSpec spec(PayoffKind::BoundedCustom);
    spec.xs_ = std::move(xs);
    spec.ys_ = std::move(ys);
    spec.bound_ = bound;
    return spec;
}

double PayoffSpec::operator()(double x, std::size_t /*regime*/) const {
    switch (kind_) {
        case PayoffKind::Call:
            return std::max(std::exp(x) - strike_, 0.0);
        case PayoffKind::Constant:
            return level_;
        case PayoffKind::BoundedCustom: {
            if (x <= xs_.front()) return ys_.front();
            if (x >= xs_.back()) return ys_.back();
            const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
            const std::size_t hi = static_cast<std::size_t>(it - xs_.begin());
            const std::size_t lo = hi - 1;
            const double w = (x - xs_[lo]) / (xs_[hi] - xs_[lo]);
            return ys_[lo] + w * (ys_[hi] - ys_[lo]);
        }
    }
    return 0.0;  // unreachable
}

double DampeningSpec::value(const RegimeOUModel& model, double t, double x) const {
    if (kind == DampeningKind::Unit) {
        return 1.0;
    }
    return std::exp(x * std::exp(-model.beta() * (model.horizon() - t)));
}

PricingQuery PricingQuery::checked(double t, double x, std::size_t regime,
                                   const RegimeOUModel& model) {
    if (regime >= model.regimes()) {
        throw_config("RegimeOutOfRange", "regime index " + std::to_string(regime + 1) +
                                             " exceeds regime count " +
                                             std::to_string(model.regimes()));
    }
    if (!(t >= 0.0) || t > model.horizon()) {
        throw_config("QueryOutOfRange", "t = " + std::to_string(t) + " outside [0, " +
                                            std::to_string(model.horizon()) + "]");
    }
    if (!std::isfinite(x)) {
        throw_config("QueryOutOfRange", "x is not finite");
    }
    return PricingQuery{t, x, regime};
}

std::vector<std::string> dampening_warnings(const PayoffSpec& payoff,
                                            const DampeningSpec& dampening) {
    std::vector<std::string> notes;
    if (dampening.kind == DampeningKind::Unit && !payoff.is_bounded()) {
        notes.push_back(
            "unit dampening with an unbounded payoff: boundedness of the scaled surface cannot "
            "be certified; results reflect the payoff clipped to the solver grid");
    }
    return notes;
}

}  // namespace fkswitch
