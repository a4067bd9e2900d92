#pragma once

// Grid sweeps over (scheme, b, d_sd, relay_frac), their configuration file,
// CSV output and the analytic-versus-simulation validation report.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "coopnet/link_model.hpp"
#include "coopnet/monte_carlo.hpp"
#include "coopnet/schemes.hpp"

namespace coopnet {

/// Malformed configuration text. line() is 1-based, 0 when not line-specific.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& source, int line, std::string key, const std::string& what);

    int line() const noexcept { return line_; }
    const std::string& key() const noexcept { return key_; }

private:
    int line_;
    std::string key_;
};

struct SweepSpec {
    std::vector<SchemeKind> schemes{std::begin(kAllSchemes), std::end(kAllSchemes)};
    std::vector<int> b_values{std::begin(kDefaultConstellations), std::end(kDefaultConstellations)};
    std::vector<double> d_sd_values{5.0, 25.0, 50.0, 75.0, 100.0};
    std::vector<double> relay_frac_values{0.5};
    NetworkParams params;
    std::optional<McConfig> mc;

    /// Throws InvariantError with a dotted config key ("sweep.b_values", "params.eta", ...).
    void validate() const;
    std::size_t cardinality() const;
};

/**
 * Parses the flat `key = value` format: one key per line, `#` starts a
 * comment, lists are comma separated with optional brackets. Keys are
 * `params.<field>` (see NetworkParams), `sweep.schemes`, `sweep.b_values`,
 * `sweep.d_sd_values`, `sweep.relay_frac_values` and `mc.trials`,
 * `mc.seed`, `mc.batch_size`, `mc.threads`. Any `mc.*` key enables the
 * simulation. The parsed spec is validated before it is returned.
 */
SweepSpec parse_config_text(std::string_view text, std::string_view source = "<config>");
SweepSpec parse_config(const std::filesystem::path& path);

struct McColumns {
    double p_success = 0.0;
    double p_success_se = 0.0;
    double e_bit = 0.0;
    double e_bit_se = 0.0;
};

struct OutputRow {
    SchemeKind scheme = SchemeKind::Direct;
    int b = 2;
    double d_sd = 0.0;
    double relay_frac = 0.0;
    double gamma_th = 0.0;
    double p_success = 0.0;
    double p_avg_w = 0.0;
    double e_bit_j = 0.0;
    double gain = 0.0;
    std::optional<McColumns> mc;
    std::string error;   ///< empty unless the point degenerated or failed
};

/// Evaluates the full grid; rows are ordered by (scheme, b, d_sd, relay_frac).
/// Per-point failures are recorded in OutputRow::error, never thrown.
std::vector<OutputRow> run_sweep(const SweepSpec& spec, unsigned threads = 0);

/// Header plus one line per row; reals with 17 significant digits.
std::string format_csv(std::span<const OutputRow> rows, bool with_mc);
void write_csv(std::span<const OutputRow> rows, const std::filesystem::path& path, bool with_mc);

/// Reads back a file produced by write_csv.
std::vector<OutputRow> read_csv(const std::filesystem::path& path);

struct ValidationOptions {
    double z_threshold = 3.0;
    double required_fraction = 0.99;
    double wide_relative_se = 0.01;   ///< flag points whose e_bit SE exceeds this fraction
};

struct PointCheck {
    OutputRow row;
    double z_p_success = 0.0;
    double z_e_bit = 0.0;
    bool within = false;      ///< both z-scores <= threshold
    bool wide_se = false;
};

struct ValidationReport {
    std::vector<PointCheck> points;
    std::size_t within_count = 0;
    double within_fraction = 0.0;
    bool passed = false;
    ValidationOptions options;

    /// Points whose z-scores exceed the threshold.
    std::vector<const PointCheck*> offenders() const;
};

/**
 * z = |analytic - simulated| / SE for p_success and e_bit at every row.
 *
 * SE is the larger of the simulation's own standard error and the binomial
 * error implied by the analytic success probability for `trials` packets,
 * so points where the simulation saw no failure at all still get a finite
 * score. Rows carrying an error count as failures.
 */
ValidationReport validate_rows(std::span<const OutputRow> rows, std::uint64_t trials,
                               const ValidationOptions& options = {});

/// run_sweep followed by validate_rows. Requires spec.mc.
ValidationReport validate(const SweepSpec& spec, const ValidationOptions& options = {});

}  // namespace coopnet
