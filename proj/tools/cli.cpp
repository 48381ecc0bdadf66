#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "nakfade/asymptotics.hpp"
#include "nakfade/bound.hpp"
#include "nakfade/montecarlo.hpp"
#include "nakfade/parallel.hpp"

namespace nakfade::cli {

namespace {

class HelpRequested : public std::runtime_error {
public:
    explicit HelpRequested(std::string text) : std::runtime_error("help"), text_(std::move(text)) {}
    const std::string& text() const noexcept { return text_; }

private:
    std::string text_;
};

std::string num(double v, const char* format = "%.10e") {
    char buf[64];
    std::snprintf(buf, sizeof buf, format, v);
    return buf;
}

std::string short_num(double v) { return num(v, "%.6g"); }

Subcommand subcommand_from(const std::string& name) {
    for (auto s : {Subcommand::curve, Subcommand::ratesweep, Subcommand::asymptote,
                   Subcommand::exponent, Subcommand::mc, Subcommand::mi}) {
        if (to_string(s) == name) return s;
    }
    throw ConfigError("subcommand", "unknown subcommand '" + name + "'");
}

double parse_double(const std::string& text, const std::string& field) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw ConfigError(field, "not a number: '" + text + "'");
    }
    if (used != text.size()) throw ConfigError(field, "not a number: '" + text + "'");
    return v;
}

std::uint64_t parse_count(const std::string& text, const std::string& field) {
    const double v = parse_double(text, field);
    if (!(v >= 1.0) || v != std::floor(v) || v > 1e18) {
        throw ConfigError(field, "must be a positive integer, got '" + text + "'");
    }
    return static_cast<std::uint64_t>(v);
}

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw NumericalError(std::string("non-finite ") + what);
}

}  // namespace

std::string to_string(Subcommand s) {
    switch (s) {
        case Subcommand::curve: return "curve";
        case Subcommand::ratesweep: return "ratesweep";
        case Subcommand::asymptote: return "asymptote";
        case Subcommand::exponent: return "exponent";
        case Subcommand::mc: return "mc";
        case Subcommand::mi: return "mi";
    }
    return "?";
}

Grid Grid::parse(const std::string& text, const std::string& field) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
    if (parts.size() == 1) return single(parse_double(parts[0], field));
    if (parts.size() != 3) {
        throw ConfigError(field, "expected a value or start:stop:step, got '" + text + "'");
    }
    Grid g{parse_double(parts[0], field), parse_double(parts[1], field),
           parse_double(parts[2], field)};
    if (!(g.step > 0.0)) throw ConfigError(field, "step must be > 0");
    if (!(g.stop >= g.start)) throw ConfigError(field, "stop must be >= start");
    return g;
}

std::vector<double> Grid::values() const {
    const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = start + step * static_cast<double>(i);
    return out;
}

std::string Grid::text() const {
    if (start == stop) return short_num(start);
    return short_num(start) + ":" + short_num(stop) + ":" + short_num(step);
}

RunConfig RunConfig::defaults_for(Subcommand s) {
    RunConfig cfg;
    cfg.subcommand = s;
    if (s == Subcommand::ratesweep) cfg.rate = Grid{0.25, 3.75, 0.25};
    if (s == Subcommand::exponent) cfg.rate = Grid{0.05, 4.0, 0.05};
    if (s == Subcommand::mi) cfg.snr_db = Grid{-10.0, 30.0, 1.0};
    return cfg;
}

std::string RunConfig::constellation_name() const {
    if (!constellation.empty()) return constellation;
    const int points = 1 << bits;
    return (bits % 2 == 0 ? "qam" : "psk") + std::to_string(points);
}

void RunConfig::validate() const {
    if (blocks < 1) throw ConfigError("blocks", "must be >= 1");
    if (bits < 1 || bits > 16) throw ConfigError("bits", "must be in [1, 16]");
    if (!(m > 0.0) || !std::isfinite(m)) throw ConfigError("m", "must be finite and > 0");
    if (cells < 2) throw ConfigError("cells", "must be >= 2");
    if (order < 1) throw ConfigError("order", "must be >= 1");
    if (samples < 1) throw ConfigError("samples", "must be >= 1");

    auto check_grid = [](const Grid& g, const std::string& field) {
        if (!std::isfinite(g.start) || !std::isfinite(g.stop) || !std::isfinite(g.step)) {
            throw ConfigError(field, "must be finite");
        }
        if (!(g.step > 0.0)) throw ConfigError(field, "step must be > 0");
        if (!(g.stop >= g.start)) throw ConfigError(field, "stop must be >= start");
    };
    check_grid(rate, "rate");
    check_grid(snr_db, "snr-db");
    for (double r : rate.values()) {
        if (!(r > 0.0) || !(r <= bits)) throw ConfigError("rate", "must satisfy 0 < R <= M");
    }
    const bool single_rate = subcommand == Subcommand::curve ||
                             subcommand == Subcommand::asymptote || subcommand == Subcommand::mc;
    if (single_rate && rate.start != rate.stop) {
        throw ConfigError("rate", "this subcommand takes a single rate");
    }
    if (subcommand == Subcommand::ratesweep && !std::isfinite(snr_db_fixed)) {
        throw ConfigError("snr-db-fixed", "must be finite");
    }
    if (subcommand == Subcommand::exponent) {
        if (lambda_scaled.empty()) throw ConfigError("lambda-scaled", "needs at least one value");
        for (double v : lambda_scaled) {
            if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError("lambda-scaled", "must be >= 0");
        }
    }
    if (subcommand == Subcommand::mc) {
        if (mode != "outage" && mode != "lowerbound") {
            throw ConfigError("mode", "must be 'outage' or 'lowerbound'");
        }
        if (!seed) throw ConfigError("seed", "an explicit seed is required for mc");
    }
    if (subcommand == Subcommand::mi || (subcommand == Subcommand::mc && mode == "outage")) {
        try {
            const Constellation c = make_constellation(constellation_name());
            if (subcommand == Subcommand::mc && c.bits() != bits) {
                throw ConfigError("constellation", "has " + std::to_string(c.bits()) +
                                                       " bits per symbol but --bits is " +
                                                       std::to_string(bits));
            }
        } catch (const std::invalid_argument& e) {
            throw ConfigError("constellation", e.what());
        }
    }
}

void apply_json(RunConfig& cfg, const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config", std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config", "top level must be an object");

    auto grid_of = [](const nlohmann::json& v, const std::string& field) {
        if (v.is_number()) return Grid::single(v.get<double>());
        if (v.is_string()) return Grid::parse(v.get<std::string>(), field);
        throw ConfigError(field, "must be a number or a 'start:stop:step' string");
    };
    try {
        for (const auto& [key, v] : j.items()) {
            if (key == "subcommand") cfg.subcommand = subcommand_from(v.get<std::string>());
            else if (key == "blocks") cfg.blocks = v.get<int>();
            else if (key == "bits") cfg.bits = v.get<int>();
            else if (key == "m") cfg.m = v.get<double>();
            else if (key == "rate") cfg.rate = grid_of(v, "rate");
            else if (key == "snr_db") cfg.snr_db = grid_of(v, "snr-db");
            else if (key == "snr_db_fixed") cfg.snr_db_fixed = v.get<double>();
            else if (key == "cells") cfg.cells = v.get<int>();
            else if (key == "constellation") cfg.constellation = v.get<std::string>();
            else if (key == "order") cfg.order = v.get<int>();
            else if (key == "samples") {
                cfg.samples = v.is_string() ? parse_count(v.get<std::string>(), "samples")
                                            : parse_count(num(v.get<double>(), "%.17g"), "samples");
            } else if (key == "seed") cfg.seed = v.get<std::uint64_t>();
            else if (key == "mode") cfg.mode = v.get<std::string>();
            else if (key == "lambda_scaled") {
                cfg.lambda_scaled = v.is_array() ? v.get<std::vector<double>>()
                                                 : std::vector<double>{v.get<double>()};
            } else if (key == "per_term") cfg.per_term = v.get<bool>();
            else if (key == "output") cfg.output = v.get<std::string>();
            else if (key == "threads") cfg.threads = v.get<unsigned>();
            else throw ConfigError(key, "unknown configuration key");
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config", std::string("wrong value type: ") + e.what());
    }
}

RunConfig parse_command_line(int argc, const char* const* argv) {
    CLI::App app{"Outage-probability bounds for Nakagami-m block-fading channels.\n"
                 "SNR values in dB are power ratios: rho = 10^(dB/10)."};
    app.require_subcommand(0, 1);

    std::string config_path;
    app.add_option("--config", config_path, "JSON config file (flags override its keys)");

    struct Raw {
        int blocks = 0, bits = 0, cells = 0, order = 0;
        unsigned threads = 0;
        double m = 0, snr_db_fixed = 0;
        std::string rate, snr_db, samples, constellation, mode, output, config;
        std::uint64_t seed = 0;
        std::vector<double> lambda_scaled;
        bool per_term = false;
    } raw;

    std::vector<CLI::App*> subs;
    auto add_common = [&](CLI::App* s) {
        s->add_option("--config", raw.config, "JSON config file (flags override its keys)");
        s->add_option("--blocks", raw.blocks, "fading blocks per codeword B (default 4)");
        s->add_option("--bits", raw.bits, "bits per symbol M (default 4)");
        s->add_option("--m", raw.m, "Nakagami shape m (default 2)");
        s->add_option("--cells", raw.cells, "grid cells over [0, M] (default 4096)");
        s->add_option("-o,--output", raw.output, "output CSV path (default stdout)");
        s->add_option("--threads", raw.threads, "worker threads, 0 = all (default 0)");
        subs.push_back(s);
    };

    auto* curve = app.add_subcommand("curve", "lower bound vs SNR");
    add_common(curve);
    curve->add_option("--rate", raw.rate, "rate R in bits per channel use (default 1)");
    curve->add_option("--snr-db", raw.snr_db, "SNR grid start:stop:step in dB (default 0:40:2)");
    curve->add_flag("--per-term", raw.per_term, "add t{t}_cdf, t{t}_weight columns");

    auto* sweep = app.add_subcommand("ratesweep", "lower bound vs rate at a fixed SNR");
    add_common(sweep);
    sweep->add_option("--rate", raw.rate, "rate grid start:stop:step (default 0.25:3.75:0.25)");
    sweep->add_option("--snr-db-fixed", raw.snr_db_fixed, "SNR in dB (default 10)");

    auto* asym = app.add_subcommand("asymptote", "lower bound and its high-SNR asymptote");
    add_common(asym);
    asym->add_option("--rate", raw.rate, "rate R (default 1)");
    asym->add_option("--snr-db", raw.snr_db, "SNR grid in dB (default 0:40:2)");

    auto* expo = app.add_subcommand("exponent", "Singleton, optimal and random-coding exponents");
    add_common(expo);
    expo->add_option("--rate", raw.rate, "rate grid (default 0.05:4:0.05)");
    expo->add_option("--lambda-scaled", raw.lambda_scaled,
                     "values v with lambda M ln2 = v m (default 0.5,2)")
        ->delimiter(',');

    auto* mc = app.add_subcommand("mc", "Monte Carlo outage or lower-bound estimate");
    add_common(mc);
    mc->add_option("--rate", raw.rate, "rate R (default 1)");
    mc->add_option("--snr-db", raw.snr_db, "SNR grid in dB (default 0:40:2)");
    mc->add_option("--samples", raw.samples, "samples per SNR point (default 1e5)");
    mc->add_option("--seed", raw.seed, "64-bit seed (required)");
    mc->add_option("--mode", raw.mode, "outage | lowerbound (default outage)");
    mc->add_option("--constellation", raw.constellation, "qam4|qam16|qam64|psk2|psk4|psk8");
    mc->add_option("--order", raw.order, "Gauss-Hermite nodes per dimension (default 128)");

    auto* mi = app.add_subcommand("mi", "discrete-input AWGN mutual information");
    add_common(mi);
    mi->add_option("--constellation", raw.constellation, "qam4|qam16|qam64|psk2|psk4|psk8");
    mi->add_option("--snr-db", raw.snr_db, "SNR grid in dB (default -10:30:1)");
    mi->add_option("--order", raw.order, "Gauss-Hermite nodes per dimension (default 128)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested(app.help());
    } catch (const CLI::CallForAllHelp&) {
        throw HelpRequested(app.help("", CLI::AppFormatMode::All));
    } catch (const CLI::ParseError& e) {
        throw ConfigError("command line", e.what());
    }

    CLI::App* active = nullptr;
    for (auto* s : subs) {
        if (s->parsed()) active = s;
    }
    if (active && !raw.config.empty()) config_path = raw.config;

    std::string json_text;
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw ConfigError("config", "cannot read '" + config_path + "'");
        std::stringstream buffer;
        buffer << in.rdbuf();
        json_text = buffer.str();
    }

    std::optional<Subcommand> chosen;
    if (active) {
        chosen = subcommand_from(active->get_name());
    } else if (!json_text.empty()) {
        RunConfig probe;
        apply_json(probe, json_text);
        if (nlohmann::json::parse(json_text).contains("subcommand")) chosen = probe.subcommand;
    }
    if (!chosen) {
        throw ConfigError("subcommand",
                          "a subcommand or --config with a 'subcommand' key is required");
    }

    RunConfig cfg = RunConfig::defaults_for(*chosen);
    if (!json_text.empty()) apply_json(cfg, json_text);
    cfg.subcommand = *chosen;

    if (active) {
        auto given = [&](const char* flag) {
            const CLI::Option* opt = active->get_option_no_throw(flag);
            return opt != nullptr && opt->count() > 0;
        };
        if (given("--blocks")) cfg.blocks = raw.blocks;
        if (given("--bits")) cfg.bits = raw.bits;
        if (given("--m")) cfg.m = raw.m;
        if (given("--cells")) cfg.cells = raw.cells;
        if (given("--output")) cfg.output = raw.output;
        if (given("--threads")) cfg.threads = raw.threads;
        if (given("--rate")) cfg.rate = Grid::parse(raw.rate, "rate");
        if (given("--snr-db")) cfg.snr_db = Grid::parse(raw.snr_db, "snr-db");
        if (given("--snr-db-fixed")) cfg.snr_db_fixed = raw.snr_db_fixed;
        if (given("--per-term")) cfg.per_term = raw.per_term;
        if (given("--lambda-scaled")) cfg.lambda_scaled = raw.lambda_scaled;
        if (given("--samples")) cfg.samples = parse_count(raw.samples, "samples");
        if (given("--seed")) cfg.seed = raw.seed;
        if (given("--mode")) cfg.mode = raw.mode;
        if (given("--constellation")) cfg.constellation = raw.constellation;
        if (given("--order")) cfg.order = raw.order;
    }
    cfg.validate();
    return cfg;
}

void run(const RunConfig& cfg, std::ostream& out) {
    cfg.validate();
    const NakagamiParam fading(cfg.m);
    const ChannelSpec base(cfg.blocks, cfg.bits, fading, cfg.rate.start);

    out << "# nakfade " << to_string(cfg.subcommand) << " B=" << cfg.blocks << " M=" << cfg.bits
        << " m=" << short_num(cfg.m) << " R=" << cfg.rate.text() << " cells=" << cfg.cells
        << " seed=" << (cfg.seed ? std::to_string(*cfg.seed) : std::string("none")) << "\n";

    switch (cfg.subcommand) {
        case Subcommand::curve: {
            const auto grid = cfg.snr_db.values();
            std::vector<BoundResult> rows(grid.size());
            parallel_for(grid.size(), cfg.threads, [&](std::size_t i) {
                rows[i] = outage_lower_bound(Snr::from_db(grid[i]), base, cfg.cells);
            });
            out << "snr_db,p_out_lower";
            if (cfg.per_term) {
                for (const auto& term : rows.front().per_term) {
                    out << ",t" << term.t << "_cdf,t" << term.t << "_weight";
                }
            }
            out << "\n";
            for (std::size_t i = 0; i < grid.size(); ++i) {
                require_finite(rows[i].value, "lower bound");
                out << short_num(grid[i]) << "," << num(rows[i].value);
                if (cfg.per_term) {
                    for (const auto& term : rows[i].per_term) {
                        out << "," << num(term.cdf) << "," << num(term.weight);
                    }
                }
                out << "\n";
            }
            break;
        }
        case Subcommand::ratesweep: {
            const auto grid = cfg.rate.values();
            const Snr snr = Snr::from_db(cfg.snr_db_fixed);
            std::vector<double> values(grid.size());
            parallel_for(grid.size(), cfg.threads, [&](std::size_t i) {
                values[i] = outage_lower_bound(snr, base.with_rate(grid[i]), cfg.cells).value;
            });
            out << "rate,p_out_lower\n";
            for (std::size_t i = 0; i < grid.size(); ++i) {
                require_finite(values[i], "lower bound");
                out << short_num(grid[i]) << "," << num(values[i]) << "\n";
            }
            break;
        }
        case Subcommand::asymptote: {
            const auto grid = cfg.snr_db.values();
            const double gain = coding_gain(base, cfg.cells);
            require_finite(gain, "coding gain");
            std::vector<double> values(grid.size());
            parallel_for(grid.size(), cfg.threads, [&](std::size_t i) {
                values[i] = outage_lower_bound(Snr::from_db(grid[i]), base, cfg.cells).value;
            });
            out << "snr_db,p_out_lower,asymptote\n";
            for (std::size_t i = 0; i < grid.size(); ++i) {
                const double a = asymptote(Snr::from_db(grid[i]), base, gain);
                require_finite(values[i], "lower bound");
                require_finite(a, "asymptote");
                out << short_num(grid[i]) << "," << num(values[i]) << "," << num(a) << "\n";
            }
            break;
        }
        case Subcommand::exponent: {
            const auto grid = cfg.rate.values();
            std::vector<BlockLengthScale> scales;
            for (double v : cfg.lambda_scaled) {
                scales.push_back(BlockLengthScale::from_scaled(v, cfg.m, cfg.bits));
            }
            out << "rate,d_singleton,d_optimal";
            for (double v : cfg.lambda_scaled) out << ",d_random_lambda" << short_num(v);
            out << ",on_discontinuity\n";
            for (double r : grid) {
                const ChannelSpec spec = base.with_rate(r);
                const OptimalExponent opt = optimal_exponent(spec);
                out << short_num(r) << "," << opt.singleton << "," << short_num(opt.value);
                for (const auto& s : scales) out << "," << short_num(random_coding_exponent(spec, s));
                out << "," << (opt.on_discontinuity ? 1 : 0) << "\n";
            }
            break;
        }
        case Subcommand::mc: {
            const auto grid = cfg.snr_db.values();
            std::optional<MiTable> table;
            if (cfg.mode == "outage") {
                table.emplace(make_constellation(cfg.constellation_name()), gauss_hermite(cfg.order));
            }
            out << "snr_db,p_hat,std_err,n\n";
            for (double db : grid) {
                const Snr snr = Snr::from_db(db);
                const McEstimate e =
                    table ? mc_outage(snr, base, *table, cfg.samples, *cfg.seed, cfg.threads)
                          : mc_lower_bound(snr, base, cfg.samples, *cfg.seed, cfg.threads);
                out << short_num(db) << "," << num(e.p_hat) << "," << num(e.std_err) << ","
                    << e.n_samples << "\n";
            }
            break;
        }
        case Subcommand::mi: {
            const auto grid = cfg.snr_db.values();
            const Constellation c = make_constellation(cfg.constellation_name());
            const QuadratureRule q = gauss_hermite(cfg.order);
            std::vector<double> values(grid.size());
            parallel_for(grid.size(), cfg.threads, [&](std::size_t i) {
                values[i] = mi_discrete(Snr::from_db(grid[i]), c, q);
            });
            out << "rho_db,mi_bits\n";
            for (std::size_t i = 0; i < grid.size(); ++i) {
                require_finite(values[i], "mutual information");
                out << short_num(grid[i]) << "," << num(values[i]) << "\n";
            }
            break;
        }
    }
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    try {
        const RunConfig cfg = parse_command_line(argc, argv);
        std::ostringstream buffer;
        run(cfg, buffer);
        if (cfg.output.empty()) {
            out << buffer.str();
        } else {
            std::ofstream file(cfg.output, std::ios::binary);
            if (!file) throw ConfigError("output", "cannot open '" + cfg.output + "' for writing");
            file << buffer.str();
        }
        return 0;
    } catch (const HelpRequested& h) {
        out << h.text();
        return 0;
    } catch (const ConfigError& e) {
        err << "nakfade: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        err << "nakfade: numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        err << "nakfade: invalid configuration: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        err << "nakfade: invalid configuration: " << e.what() << "\n";
        return 2;
    } catch (const std::runtime_error& e) {
        err << "nakfade: numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        err << "nakfade: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace nakfade::cli
