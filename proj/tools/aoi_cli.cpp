// Command-line front end: analyze, simulate, validate, optimize, tradeoff,
// sweep. Emits CSV (or JSON with --json). Exit codes: 0 ok, 2 bad
// parameters, 3 numerical/consistency failure, 4 validation over tolerance.
#include <cassert>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "aoi/coupling.hpp"
#include "aoi/errors.hpp"
#include "aoi/optim.hpp"
#include "aoi/sim.hpp"

using nlohmann::json;

namespace {

struct Cell {
    std::string text;
    bool is_number = false;
    double num = 0.0;
    std::uint64_t unum = 0;
    bool is_uint = false;
};

// Locale-independent shortest round-trip formatting.
std::string fmt(double v) {
    if (!std::isfinite(v)) throw aoi::ConsistencyError("non-finite value in output");
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    assert(ec == std::errc());
    return std::string(buf, p);
}

Cell num(double v) { return {fmt(v), true, v, 0, false}; }
Cell cnt(std::uint64_t v) { return {std::to_string(v), true, 0.0, v, true}; }
Cell txt(std::string s) { return {std::move(s), false, 0.0, 0, false}; }

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<Cell>> rows;

    std::string csv() const {
        std::string out;
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (i) out += ',';
            out += header[i];
        }
        out += '\n';
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i) out += ',';
                out += row[i].text;
            }
            out += '\n';
        }
        return out;
    }

    std::string as_json() const {
        json arr = json::array();
        for (const auto& row : rows) {
            json obj = json::object();
            for (std::size_t i = 0; i < row.size(); ++i) {
                const Cell& c = row[i];
                if (c.is_uint)
                    obj[header[i]] = c.unum;
                else if (c.is_number)
                    obj[header[i]] = c.num;
                else
                    obj[header[i]] = c.text;
            }
            arr.push_back(obj);
        }
        return arr.dump(2) + "\n";
    }
};

aoi::SchemeId parse_scheme(const std::string& s) {
    if (s == "np-nobuffer") return aoi::SchemeId::NP_NoBuffer;
    if (s == "np-buffer") return aoi::SchemeId::NP_Buffer;
    if (s == "preempt-tx") return aoi::SchemeId::Preempt_Tx;
    if (s == "preempt-comp") return aoi::SchemeId::Preempt_Comp;
    throw CLI::ValidationError("--scheme",
                               "expected one of np-nobuffer, np-buffer, preempt-tx, preempt-comp");
}

aoi::DistKind parse_kind(const std::string& s) {
    if (s == "gamma") return aoi::DistKind::Gamma;
    if (s == "exponential") return aoi::DistKind::Exponential;
    if (s == "deterministic") return aoi::DistKind::Deterministic;
    throw CLI::ValidationError("--dist", "expected gamma, exponential or deterministic");
}

// Options shared by every command. Commands only read what they need.
struct CommonOpts {
    std::string scheme_name;
    double lambda = 0.0;
    std::string dist_kind = "gamma";
    double mean = 0.0;
    double shape_k = 1.0;
    double mu = 0.0;
    double b0 = 0.0;
    double alpha = 0.0;
    double p_min = 1.0;
    double p_max = 10.0;
    std::string out_path;
    std::string config_path;
    bool as_json = false;

    CLI::Option* mu_opt = nullptr;
    CLI::Option* b0_opt = nullptr;
    CLI::Option* alpha_opt = nullptr;
    CLI::Option* mean_opt = nullptr;

    aoi::SchemeId scheme() const { return parse_scheme(scheme_name); }

    aoi::CompFamily family() const {
        aoi::CompFamily f;
        f.kind = parse_kind(dist_kind);
        f.shape_k = shape_k;
        return f;
    }

    bool has_coupling() const { return b0_opt->count() > 0 || alpha_opt->count() > 0; }

    void check_rate_source(bool coupling_required) const {
        const bool have_mu = mu_opt->count() > 0;
        if (have_mu && has_coupling())
            throw CLI::ValidationError("--mu", "give either --mu or --b0/--alpha, not both");
        if (!have_mu && !has_coupling())
            throw CLI::ValidationError("--mu", "one of --mu or --b0/--alpha is required");
        if (coupling_required && have_mu)
            throw CLI::ValidationError("--mu", "this command optimizes over E[P]; use --b0/--alpha");
        if (has_coupling() && (b0_opt->count() == 0 || alpha_opt->count() == 0))
            throw CLI::ValidationError("--b0", "--b0 and --alpha must be given together");
    }

    aoi::CouplingSpec coupling() const { return aoi::CouplingSpec(b0, alpha, p_min, p_max); }

    aoi::SystemParams params() const {
        if (mean_opt->count() == 0)
            throw CLI::ValidationError("--mean", "--mean is required for this command");
        if (mu_opt->count() > 0) return aoi::SystemParams(lambda, family().at_mean(mean), mu);
        return aoi::resolve_params(coupling(), lambda, family(), mean);
    }
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    cmd->add_option("--scheme", o.scheme_name, "np-nobuffer | np-buffer | preempt-tx | preempt-comp")
        ->required();
    cmd->add_option("--lambda", o.lambda, "Poisson arrival rate")->required();
    cmd->add_option("--dist", o.dist_kind, "computation law: gamma | exponential | deterministic");
    o.mean_opt = cmd->add_option("--mean", o.mean, "mean computation time E[P]");
    cmd->add_option("--k", o.shape_k, "Gamma shape parameter");
    o.mu_opt = cmd->add_option("--mu", o.mu, "transmission rate (mutually exclusive with --b0/--alpha)");
    o.b0_opt = cmd->add_option("--b0", o.b0, "coupling scale: 1/mu = b0*exp(-alpha*E[P])");
    o.alpha_opt = cmd->add_option("--alpha", o.alpha, "coupling decay rate");
    cmd->add_option("--pmin", o.p_min, "lower bound on E[P]");
    cmd->add_option("--pmax", o.p_max, "upper bound on E[P]");
    cmd->add_option("--out", o.out_path, "output file (default stdout)");
    cmd->add_option("--config", o.config_path, "key = value config file; flags override");
    cmd->add_flag("--json", o.as_json, "emit JSON instead of CSV");
}

struct SimOpts {
    std::uint64_t deliveries = 1'000'000;
    std::uint64_t warmup = 1'000;
    std::uint64_t seed = 1;
    std::uint32_t batches = 30;
    std::uint32_t reps = 1;
    std::string event_log_path;
    CLI::Option* seed_opt = nullptr;
};

void add_sim(CLI::App* cmd, SimOpts& o) {
    cmd->add_option("--deliveries,--packets", o.deliveries, "delivered packets per run");
    cmd->add_option("--warmup", o.warmup, "deliveries discarded before measuring");
    o.seed_opt = cmd->add_option("--seed", o.seed, "RNG seed (default from AOI_SEED, else 1)");
    cmd->add_option("--batches", o.batches, "batch count for confidence intervals");
    cmd->add_option("--reps", o.reps, "independent replications");
    cmd->add_option("--event-log", o.event_log_path, "write one line per simulation event");
}

void apply_env_seed(SimOpts& o) {
    if (o.seed_opt->count() > 0) return;
    const char* env = std::getenv("AOI_SEED");
    if (!env || !*env) return;
    std::uint64_t v = 0;
    const auto [p, ec] = std::from_chars(env, env + std::string(env).size(), v);
    if (ec != std::errc() || *p != '\0')
        throw std::invalid_argument("AOI_SEED is not a valid unsigned integer");
    o.seed = v;
}

aoi::SimResult run_sim(const CommonOpts& c, const SimOpts& s) {
    aoi::SimConfig cfg(c.scheme(), c.params());
    cfg.deliveries = s.deliveries;
    cfg.warmup_deliveries = s.warmup;
    cfg.seed = s.seed;
    cfg.batches = s.batches;
    std::ofstream log;
    if (!s.event_log_path.empty() && s.reps == 1) {
        log.open(s.event_log_path);
        if (!log) throw std::invalid_argument("cannot open event log: " + s.event_log_path);
        cfg.event_log = &log;
    }
    return s.reps == 1 ? aoi::simulate(cfg) : aoi::replicate(cfg, s.reps);
}

// `key = value` lines, # comments, duplicates resolved last-wins with a
// warning. Returned as flag tokens injected before the real arguments.
std::vector<std::string> config_tokens(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot read config file: " + path);
    std::vector<std::pair<std::string, std::string>> entries;
    std::map<std::string, std::size_t> seen;
    std::string line;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                        ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": empty key");
        if (auto it = seen.find(key); it != seen.end()) {
            std::cerr << "warning: duplicate key '" << key << "' in " << path
                      << ", last value wins\n";
            entries[it->second].second = val;
        } else {
            seen[key] = entries.size();
            entries.emplace_back(key, val);
        }
    }
    std::vector<std::string> tokens;
    for (const auto& [k, v] : entries) {
        tokens.push_back("--" + k);
        tokens.push_back(v);
    }
    return tokens;
}

// Pull --config out of argv before the CLI11 parse so its values can be
// injected ahead of the explicit flags (explicit flags then win).
std::optional<std::string> prescan_config(const std::vector<std::string>& args) {
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
        if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
    }
    return std::nullopt;
}

void write_output(const Table& table, const CommonOpts& o) {
    const std::string body = o.as_json ? table.as_json() : table.csv();
    if (o.out_path.empty()) {
        std::cout << body;
        return;
    }
    std::ofstream out(o.out_path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open output file: " + o.out_path);
    out << body;
}

std::vector<Cell> model_cells(const CommonOpts& o, const aoi::SystemParams& p) {
    return {txt(o.scheme_name), num(p.lambda), num(p.comp.mean()),
            num(o.family().kind == aoi::DistKind::Gamma ? o.shape_k : 1.0), num(p.mu)};
}

int cmd_analyze(const CommonOpts& o) {
    o.check_rate_source(false);
    const aoi::SystemParams p = o.params();
    const aoi::AoiReport r = aoi::full_report(o.scheme(), p);
    Table t;
    t.header = {"scheme", "lambda", "mean_comp", "k", "mu", "avg_aoi", "avg_peak_aoi",
                "p_busy", "eff_rate"};
    auto row = model_cells(o, p);
    row.push_back(num(r.avg_aoi));
    row.push_back(num(r.avg_peak_aoi));
    row.push_back(num(r.p_busy));
    row.push_back(num(r.eff_rate));
    t.rows.push_back(std::move(row));
    write_output(t, o);
    return 0;
}

int cmd_simulate(const CommonOpts& o, SimOpts& s) {
    o.check_rate_source(false);
    apply_env_seed(s);
    const aoi::SystemParams p = o.params();
    const aoi::SimResult r = run_sim(o, s);
    Table t;
    t.header = {"scheme", "lambda", "mean_comp", "k", "mu", "deliveries", "seed",
                "avg_aoi", "avg_aoi_halfwidth", "avg_peak_aoi", "peak_halfwidth",
                "busy_found_frac", "discarded_stage1", "discarded_stage2", "sim_time"};
    auto row = model_cells(o, p);
    row.push_back(cnt(r.delivered));
    row.push_back(cnt(s.seed));
    row.push_back(num(r.avg_aoi));
    row.push_back(num(r.avg_aoi_halfwidth));
    row.push_back(num(r.avg_peak_aoi));
    row.push_back(num(r.peak_halfwidth));
    row.push_back(num(r.busy_found_frac));
    row.push_back(cnt(r.discarded_stage1));
    row.push_back(cnt(r.discarded_stage2));
    row.push_back(num(r.sim_time));
    t.rows.push_back(std::move(row));
    write_output(t, o);
    return 0;
}

int cmd_validate(const CommonOpts& o, SimOpts& s, double tol) {
    o.check_rate_source(false);
    apply_env_seed(s);
    const aoi::AoiReport a = aoi::full_report(o.scheme(), o.params());
    const aoi::SimResult r = run_sim(o, s);
    Table t;
    t.header = {"metric", "analytic", "simulated", "rel_error", "pass"};
    bool all_pass = true;
    auto add = [&](const char* name, double an, double si) {
        const double rel = std::fabs(an - si) / std::fabs(an);
        const bool ok = rel <= tol;
        all_pass = all_pass && ok;
        t.rows.push_back({txt(name), num(an), num(si), num(rel), cnt(ok ? 1 : 0)});
    };
    add("avg_aoi", a.avg_aoi, r.avg_aoi);
    add("avg_peak_aoi", a.avg_peak_aoi, r.avg_peak_aoi);
    write_output(t, o);
    return all_pass ? 0 : 4;
}

int cmd_optimize(const CommonOpts& o, double w1, double w2, std::uint32_t grid,
                 double refine_tol) {
    o.check_rate_source(true);
    const aoi::ObjectiveWeights w(w1, w2);
    const aoi::OptResult r = aoi::optimize_mean_comp(o.scheme(), o.lambda, o.family(),
                                                     o.coupling(), w, grid, refine_tol);
    Table t;
    t.header = {"scheme", "lambda", "k", "b0", "alpha", "w1", "w2", "best_mean_comp",
                "best_objective", "avg_aoi", "avg_peak_aoi", "evaluations"};
    t.rows.push_back({txt(o.scheme_name), num(o.lambda), num(o.shape_k), num(o.b0),
                      num(o.alpha), num(w1), num(w2), num(r.best_mean_comp),
                      num(r.best_objective), num(r.avg_aoi_at_opt), num(r.avg_peak_at_opt),
                      cnt(r.evaluations)});
    write_output(t, o);
    return 0;
}

int cmd_tradeoff(const CommonOpts& o, std::uint32_t steps) {
    o.check_rate_source(true);
    const auto pts = aoi::tradeoff_curve(o.scheme(), o.lambda, o.family(), o.coupling(), steps);
    Table t;
    t.header = {"w1", "w2", "mean_comp", "avg_aoi", "avg_peak_aoi"};
    for (const auto& p : pts)
        t.rows.push_back({num(p.w1), num(p.w2), num(p.mean_comp), num(p.avg_aoi),
                          num(p.avg_peak_aoi)});
    write_output(t, o);
    return 0;
}

int cmd_sweep(const CommonOpts& o, const std::string& parameter, double from, double to,
              std::uint32_t steps, double w1, double w2) {
    o.check_rate_source(true);
    aoi::SweepParameter p;
    if (parameter == "alpha")
        p = aoi::SweepParameter::Alpha;
    else if (parameter == "k")
        p = aoi::SweepParameter::ShapeK;
    else if (parameter == "lambda")
        p = aoi::SweepParameter::Lambda;
    else if (parameter == "mean-comp")
        p = aoi::SweepParameter::MeanComp;
    else
        throw CLI::ValidationError("--parameter", "expected alpha, k, lambda or mean-comp");
    const auto rows = aoi::sweep(o.scheme(), o.lambda, o.family(), o.coupling(), p, from, to,
                                 steps, aoi::ObjectiveWeights(w1, w2));
    Table t;
    t.header = {"parameter", "value", "mean_comp", "avg_aoi", "avg_peak_aoi"};
    for (const auto& r : rows)
        t.rows.push_back({txt(parameter), num(r.value), num(r.mean_comp), num(r.avg_aoi),
                          num(r.avg_peak_aoi)});
    write_output(t, o);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Average AoI and peak AoI for two-stage computation/transmission queues"};
    app.require_subcommand(1);

    CommonOpts an, si, va, op, tr, sw;
    SimOpts sim_si, sim_va;
    double tol = 0.02;
    double op_w1 = 1.0, op_w2 = 0.0;
    std::uint32_t op_grid = 64;
    double op_refine = 1e-4;
    std::uint32_t tr_steps = 25;
    std::string sw_param;
    double sw_from = 0.0, sw_to = 0.0;
    std::uint32_t sw_steps = 10;
    double sw_w1 = 1.0, sw_w2 = 0.0;

    CLI::App* c_an = app.add_subcommand("analyze", "closed-form metrics at one point");
    add_common(c_an, an);
    CLI::App* c_si = app.add_subcommand("simulate", "discrete-event estimate at one point");
    add_common(c_si, si);
    add_sim(c_si, sim_si);
    CLI::App* c_va = app.add_subcommand("validate", "analytic vs simulation relative errors");
    add_common(c_va, va);
    add_sim(c_va, sim_va);
    c_va->add_option("--tol", tol, "per-metric relative error threshold");
    CLI::App* c_op = app.add_subcommand("optimize", "best E[P] for the weighted objective");
    add_common(c_op, op);
    c_op->add_option("--w1", op_w1, "average AoI weight");
    c_op->add_option("--w2", op_w2, "peak AoI weight");
    c_op->add_option("--grid", op_grid, "coarse grid points");
    c_op->add_option("--refine-tol", op_refine, "golden-section bracket width");
    CLI::App* c_tr = app.add_subcommand("tradeoff", "Pareto curve over objective weights");
    add_common(c_tr, tr);
    c_tr->add_option("--steps", tr_steps, "weight sweep steps");
    CLI::App* c_sw = app.add_subcommand("sweep", "optimal point along one parameter");
    add_common(c_sw, sw);
    c_sw->add_option("--parameter", sw_param, "alpha | k | lambda | mean-comp")->required();
    c_sw->add_option("--from", sw_from, "sweep start")->required();
    c_sw->add_option("--to", sw_to, "sweep end")->required();
    c_sw->add_option("--steps", sw_steps, "sweep points");
    c_sw->add_option("--w1", sw_w1, "average AoI weight");
    c_sw->add_option("--w2", sw_w2, "peak AoI weight");

    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        if (const auto cfg = prescan_config(args)) {
            const auto injected = config_tokens(*cfg);
            std::vector<std::string> merged;
            if (!args.empty() && !args[0].empty() && args[0][0] != '-') {
                merged.push_back(args[0]);
                merged.insert(merged.end(), injected.begin(), injected.end());
                merged.insert(merged.end(), args.begin() + 1, args.end());
            } else {
                merged = injected;
                merged.insert(merged.end(), args.begin(), args.end());
            }
            args = std::move(merged);
        }
        // CLI11 parses reversed token lists
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (c_an->parsed()) return cmd_analyze(an);
        if (c_si->parsed()) return cmd_simulate(si, sim_si);
        if (c_va->parsed()) return cmd_validate(va, sim_va, tol);
        if (c_op->parsed()) return cmd_optimize(op, op_w1, op_w2, op_grid, op_refine);
        if (c_tr->parsed()) return cmd_tradeoff(tr, tr_steps);
        if (c_sw->parsed()) return cmd_sweep(sw, sw_param, sw_from, sw_to, sw_steps, sw_w1, sw_w2);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
