#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace nakfade::cli {

enum class Subcommand { curve, ratesweep, asymptote, exponent, mc, mi };

std::string to_string(Subcommand s);

/// Inclusive arithmetic grid "start:stop:step", or a single value.
struct Grid {
    double start = 0.0;
    double stop = 0.0;
    double step = 1.0;

    static Grid parse(const std::string& text, const std::string& field);
    static Grid single(double v) { return {v, v, 1.0}; }

    std::vector<double> values() const;
    std::string text() const;
};

/// Rejected configuration. `field` names the offending option.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& message)
        : std::runtime_error("invalid " + field + ": " + message), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// A computed value was NaN or infinite.
class NumericalError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    Subcommand subcommand = Subcommand::curve;
    int blocks = 4;
    int bits = 4;
    double m = 2.0;
    Grid rate = Grid::single(1.0);
    Grid snr_db{0.0, 40.0, 2.0};
    double snr_db_fixed = 10.0;
    int cells = 4096;
    std::string constellation;  // empty: derived from bits
    int order = 128;
    std::uint64_t samples = 100000;
    std::optional<std::uint64_t> seed;
    std::string mode = "outage";
    std::vector<double> lambda_scaled{0.5, 2.0};
    bool per_term = false;
    std::string output;  // empty: stdout
    unsigned threads = 0;

    /// Defaults, including the per-subcommand grid defaults.
    static RunConfig defaults_for(Subcommand s);

    /// Throws ConfigError naming the first invalid field.
    void validate() const;
    std::string constellation_name() const;
};

/// Parses argv (CLI11 flags, optional --config JSON; flags override the
/// file). Throws ConfigError on any parse or validation failure.
RunConfig parse_command_line(int argc, const char* const* argv);

/// Applies the keys of a JSON object onto `cfg`.
void apply_json(RunConfig& cfg, const std::string& json_text);

/// Runs the configured computation and writes CSV to `out`.
void run(const RunConfig& cfg, std::ostream& out);

/// Full front end: parse, run, write to cfg.output or stdout.
/// Returns 0 on success, 2 on configuration errors, 3 on numerical failure.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nakfade::cli
