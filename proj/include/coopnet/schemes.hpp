#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "coopnet/link_model.hpp"

namespace coopnet {

enum class SchemeKind { Direct, AfNonMrc, AfMrc, DfNonMrc, DfMrc };

inline constexpr SchemeKind kAllSchemes[] = {SchemeKind::Direct, SchemeKind::AfNonMrc,
                                             SchemeKind::AfMrc, SchemeKind::DfNonMrc,
                                             SchemeKind::DfMrc};

/// Stable identifier used in configs and CSV output ("direct", "af", "af_mrc", "df", "df_mrc").
std::string_view scheme_name(SchemeKind kind);

/// Inverse of scheme_name; also accepts '-' in place of '_'. Empty on unknown names.
std::optional<SchemeKind> parse_scheme(std::string_view name);

bool uses_mrc(SchemeKind kind);

/// Success probability under-flowed: the expected energy would be unbounded.
class DegenerateSuccessError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Below this the per-round success probability is reported as degenerate.
inline constexpr double kMinSuccessProbability = 1e-12;

struct SchemeResult {
    SchemeKind kind = SchemeKind::Direct;
    double p_success = 0.0;   ///< per-round delivery probability
    double p_avg = 0.0;       ///< average power drawn during a round [W]
    double e_bit = 0.0;       ///< expected energy per delivered bit [J/bit]
    double gain = 1.0;        ///< direct e_bit over this scheme's e_bit
    double gamma_th = 0.0;
    double t_on = 0.0;
    double alpha = 0.0;
};

/// Round powers shared by the analytic evaluators and the simulator.
struct RoundPowers {
    double direct;       ///< source transmits, destination listens
    double one_slot;     ///< broadcast with the relay also listening
    double two_slot;     ///< broadcast followed by a relay transmission
};

RoundPowers round_powers(const NetworkParams& params, double alpha);

/// (p_avg t_on + P_tr T_tr) / (L p_success), expected energy per delivered bit.
double energy_per_bit(const NetworkParams& params, double p_avg, double t_on, double p_success);

SchemeResult evaluate_direct(const NetworkParams& params, const Geometry& geom,
                             const Modulation& mod);
SchemeResult evaluate_af(const NetworkParams& params, const Geometry& geom, const Modulation& mod,
                         bool mrc);
SchemeResult evaluate_df(const NetworkParams& params, const Geometry& geom, const Modulation& mod,
                         bool mrc);
SchemeResult evaluate(SchemeKind kind, const NetworkParams& params, const Geometry& geom,
                      const Modulation& mod);

struct ConstellationChoice {
    int b = 0;
    SchemeResult result;
    std::vector<int> excluded;   ///< candidates dropped because their evaluation degenerated
};

inline constexpr int kDefaultConstellations[] = {2, 4, 6, 8, 10};

/**
 * Candidate b minimizing energy per bit; ties go to the larger b.
 *
 * Candidates whose evaluation raises DegenerateSuccessError are skipped and
 * listed in `excluded`. Throws std::invalid_argument for an empty candidate
 * list and DegenerateSuccessError when every candidate degenerates.
 */
ConstellationChoice optimal_constellation(const NetworkParams& params, const Geometry& geom,
                                          SchemeKind scheme,
                                          std::span<const int> candidates = kDefaultConstellations);

}  // namespace coopnet
