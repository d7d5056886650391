// cww: exact computation of the Bellman function for the dyadic
// square-function tail problem. All numbers cross this boundary as exact
// strings ("p/q" rationals, "k/2^n" dyadics); --decimal adds display-only
// approximations clearly marked approx.
//
// Exit codes: 0 success, 2 domain error, 3 inconclusive at the precision cap,
// 64 usage error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "cww/bridge.hpp"
#include "cww/certify.hpp"
#include "cww/dpgrid.hpp"
#include "cww/extremal.hpp"
#include "cww/lineartest.hpp"
#include "cww/parallel.hpp"

namespace {

using namespace cww;

constexpr int kExitOk = 0;
constexpr int kExitDomain = 2;
constexpr int kExitInconclusive = 3;
constexpr int kExitUsage = 64;

struct Config {
    unsigned precision_bits = kDefaultPrecisionBits;
    unsigned precision_cap = kDefaultPrecisionCap;
    std::string format = "text";  // text | json | csv
    int parallel = 0;
    bool decimal = false;
};

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

void emit_interval(const Config& cfg, const std::string& name, const RatInterval& v) {
    if (cfg.format == "json") {
        nlohmann::ordered_json j;
        j[name] = {{"lo", v.lo().to_string()}, {"hi", v.hi().to_string()}};
        if (cfg.decimal)
            j["approx"] = {{"lo", v.lo().to_decimal()}, {"hi", v.hi().to_decimal()}};
        std::cout << j.dump() << "\n";
        return;
    }
    std::cout << name << " lo=" << v.lo().to_string() << " hi=" << v.hi().to_string();
    if (cfg.decimal)
        std::cout << " approx=[" << v.lo().to_decimal() << ", " << v.hi().to_decimal() << "]";
    std::cout << "\n";
}

int cmd_bridge_eval(const Config& cfg, const std::string& arg) {
    const DyadicRational t = DyadicRational::parse(arg);
    BridgeCache cache(cfg.precision_cap);
    emit_interval(cfg, "A(" + t.to_string() + ")",
                  bridge_value(t, Precision{cfg.precision_bits}, cache));
    return kExitOk;
}

int cmd_bridge_invert(const Config& cfg, const std::string& arg, const std::string& tol_s) {
    const Rational x = Rational::parse(arg);
    const DyadicRational tol = DyadicRational::parse(tol_s);
    BridgeCache cache(cfg.precision_cap);
    const auto [lo, hi] = bridge_inverse(x, tol, cache);
    if (cfg.format == "json") {
        nlohmann::ordered_json j;
        j["t_lo"] = lo.to_string();
        j["t_hi"] = hi.to_string();
        std::cout << j.dump() << "\n";
    } else {
        std::cout << "t_lo=" << lo.to_string() << " t_hi=" << hi.to_string() << "\n";
    }
    return kExitOk;
}

int cmd_bellman_eval(const Config& cfg, const std::string& arg) {
    const Rational x = Rational::parse(arg);
    BridgeCache cache(cfg.precision_cap);
    emit_interval(cfg, "B(" + x.to_string() + ")",
                  big_b(x, Precision{cfg.precision_bits}, cache));
    return kExitOk;
}

int cmd_extremal_build(const Config& cfg, const std::string& arg, bool verify, bool haar) {
    const DyadicRational t = DyadicRational::parse(arg);
    if (!t.in_unit_half()) throw DomainError("t must lie in [0, 1/2]");
    BridgeCache cache(cfg.precision_cap);
    const Precision p{cfg.precision_bits};
    const auto tree = build_extremal(t, p, cache);

    nlohmann::ordered_json out = nlohmann::ordered_json::parse(tree->to_json());
    nlohmann::ordered_json doc;
    doc["t"] = t.to_string();
    doc["tree"] = out;
    bool ok = true;
    if (verify) {
        const TailResult tail = tail_measure(tree, Threshold::at_grid(t), p, cache);
        const RatInterval sq = square_function_sup(tree, p, cache);
        const Rational expect = Rational(1) - t.to_rational();
        const bool measure_ok = tail.measure.to_rational() == expect;
        const bool sq_ok = sq.hi() <= Rational(1);
        doc["verify"] = {{"tail_measure", tail.measure.to_rational().to_string()},
                         {"expected", expect.to_string()},
                         {"measure_ok", measure_ok},
                         {"sq_sup_le_1", sq_ok}};
        ok = measure_ok && sq_ok;
    }
    if (haar) {
        nlohmann::ordered_json h;
        for (const auto& [addr, c] : haar_coefficients(tree, p, cache))
            h[addr.empty() ? "I" : addr] = {{"lo", c.lo().to_string()},
                                            {"hi", c.hi().to_string()}};
        doc["haar"] = h;
    }
    std::cout << doc.dump(2) << "\n";
    return ok ? kExitOk : kExitDomain;
}

int cmd_certify(const Config& cfg, const std::string& id, const std::string& out_dir) {
    RunOptions opt;
    opt.precision = Precision{cfg.precision_bits};
    opt.cap_bits = cfg.precision_cap;
    std::vector<std::string> ids;
    if (id == "all")
        ids = pipeline_ids();
    else
        ids.push_back(id);

    // Independent pipelines fan out; emission stays in id order.
    std::vector<Certificate> certs(ids.size());
#pragma omp parallel for schedule(dynamic, 1) if (ids.size() > 1 && parallel_enabled())
    for (long i = 0; i < static_cast<long>(ids.size()); ++i)
        certs[static_cast<std::size_t>(i)] = run_pipeline(ids[static_cast<std::size_t>(i)], opt);

    bool all_ok = true;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        const Certificate& cert = certs[i];
        all_ok = all_ok && cert.success;
        std::cout << cert.to_json() << "\n";
        if (!out_dir.empty()) {
            std::string name = ids[i];
            for (auto& c : name)
                if (c == '.') c = '_';
            std::ofstream f(out_dir + "/cert_" + name + ".json");
            f << cert.to_json(false) << "\n";
        }
    }
    return all_ok ? kExitOk : 1;
}

int cmd_plot_bridge(const Config& cfg, unsigned level) {
    BridgeCache cache(cfg.precision_cap);
    const auto pts = grid_points(level);
    const auto vals = cache.level_values(level, Precision{cfg.precision_bits});
    std::cout << "t,A_lo,A_hi\n";
    for (std::size_t i = 0; i < pts.size(); ++i)
        std::cout << csv_quote(pts[i].to_rational().to_string()) << ","
                  << csv_quote(vals[i].lo().to_string()) << ","
                  << csv_quote(vals[i].hi().to_string()) << "\n";
    return kExitOk;
}

int cmd_plot_bellman(const Config& cfg, unsigned level) {
    BridgeCache cache(cfg.precision_cap);
    // Bracket width tied to the plot resolution, not the full enclosure bits.
    const Precision p{level + 2};
    std::cout << "x,B_lo,B_hi,tilde_B\n";
    const long n = 1L << level;
    for (long k = 0; k <= n; ++k) {
        const Rational x(k, static_cast<unsigned long>(n));
        const RatInterval b = big_b(x, p, cache);
        std::cout << csv_quote(x.to_string()) << "," << csv_quote(b.lo().to_string()) << ","
                  << csv_quote(b.hi().to_string()) << ","
                  << csv_quote(tilde_b(x).to_string()) << "\n";
    }
    return kExitOk;
}

int cmd_plot_oracle(const Config&, unsigned depth, unsigned xgrid, unsigned taugrid) {
    DpGrid grid;
    grid.depth = depth;
    grid.xs = dp_xgrid(xgrid, Rational(1));
    grid.taus = dp_taugrid(taugrid);
    grid = dp_oracle(std::move(grid));
    std::cout << "x,oracle_lb\n";
    for (std::size_t i = 0; i < grid.xs.size(); ++i)
        std::cout << csv_quote(grid.xs[i].to_string()) << ","
                  << csv_quote(grid.table[depth][i].to_string()) << "\n";
    return kExitOk;
}

int cmd_poly_test(const Config& cfg, const std::string& path, const std::string& order_csv) {
    std::ifstream f(path);
    if (!f) throw DomainError("cannot open polynomial file " + path);
    std::stringstream buf;
    buf << f.rdbuf();
    const MultiPoly poly = MultiPoly::from_json(buf.str());
    std::vector<std::string> order;
    if (!order_csv.empty()) {
        std::stringstream ss(order_csv);
        std::string item;
        while (std::getline(ss, item, ',')) order.push_back(item);
    } else {
        order = poly.vars();
    }
    const TestReport r = linear_test(poly, order);
    if (cfg.format == "json") {
        nlohmann::ordered_json j;
        j["verdict"] = r.passed() ? "pass" : "fail";
        if (!r.passed()) j["witness"] = r.to_string();
        std::cout << j.dump() << "\n";
    } else {
        std::cout << r.to_string() << "\n";
    }
    return r.passed() ? kExitOk : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact Bellman function of the dyadic square-function tail problem"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags are accepted after subcommands

    Config cfg;
    if (const char* env = std::getenv("CWW_PRECISION_BITS"))
        cfg.precision_bits = static_cast<unsigned>(std::strtoul(env, nullptr, 10));
    app.add_option("--precision-bits", cfg.precision_bits, "target enclosure width 2^-bits");
    app.add_option("--precision-cap", cfg.precision_cap, "refinement cap in bits");
    app.add_option("--format", cfg.format, "output format: text, json or csv")
        ->check(CLI::IsMember({"text", "json", "csv"}));
    app.add_option("--parallel", cfg.parallel, "OpenMP thread count (0 = default)");
    app.add_flag("--decimal", cfg.decimal, "append display-only decimal approximations");

    // bridge {eval, invert}
    auto* bridge = app.add_subcommand("bridge", "the dyadic suspension bridge A");
    auto* bridge_eval = bridge->add_subcommand("eval", "enclosure of A(t), t in [0,1/2]");
    std::string bridge_t;
    bridge_eval->add_option("t", bridge_t, "dyadic rational k/2^n or p/q")->required();
    auto* bridge_invert = bridge->add_subcommand("invert", "bracket of A^-1(x), x in [0,1]");
    std::string invert_x, invert_tol = "1/2^20";
    bridge_invert->add_option("x", invert_x, "rational p/q")->required();
    bridge_invert->add_option("--tol", invert_tol, "bracket width bound (dyadic)");

    // bellman eval
    auto* bellman = app.add_subcommand("bellman", "the Bellman function B = 1 - A^-1");
    auto* bellman_eval = bellman->add_subcommand("eval", "enclosure of B(x), x <= 1");
    std::string bellman_x;
    bellman_eval->add_option("x", bellman_x, "rational p/q")->required();

    // extremal build
    auto* extremal = app.add_subcommand("extremal", "extremal Haar combinations");
    auto* extremal_build = extremal->add_subcommand("build", "build the tree at A(t)");
    std::string extremal_t;
    bool verify = false, haar = false;
    extremal_build->add_option("t", extremal_t, "dyadic rational in [0,1/2]")->required();
    extremal_build->add_flag("--verify", verify, "check tail measure and square function");
    extremal_build->add_flag("--haar", haar, "dump flat Haar coefficients");

    // certify
    auto* certify = app.add_subcommand("certify", "run proof pipelines");
    std::string cert_id, cert_out;
    certify->add_option("id", cert_id, "4.3 4.4 4.5 4.6 level5 phi tilde-b case3 reductions all")
        ->required();
    certify->add_option("--out", cert_out, "directory for golden certificate files");

    // plot
    auto* plot = app.add_subcommand("plot", "emit plot data (CSV)");
    auto* plot_bridge = plot->add_subcommand("bridge", "t, A_lo, A_hi over D_n");
    unsigned plot_level = 10;
    plot_bridge->add_option("--level", plot_level, "grid level n <= 14");
    auto* plot_bellman = plot->add_subcommand("bellman", "x, B_lo, B_hi, tilde_B on [0,1]");
    unsigned bellman_level = 10;
    plot_bellman->add_option("--level", bellman_level, "x-grid level n <= 14");
    auto* plot_oracle = plot->add_subcommand("oracle", "x, DP lower bound");
    unsigned oracle_depth = 12, oracle_xgrid = 256, oracle_taugrid = 512;
    plot_oracle->add_option("--depth", oracle_depth, "value-iteration depth");
    plot_oracle->add_option("--xgrid", oracle_xgrid, "x-grid points on [0,1]");
    plot_oracle->add_option("--taugrid", oracle_taugrid, "tau-grid points");

    // poly test (polynomial JSON is also the golden-file format)
    auto* poly = app.add_subcommand("poly", "polynomial utilities");
    auto* poly_test = poly->add_subcommand("test", "partial-sum non-negativity test");
    std::string poly_path, poly_order;
    poly_test->add_option("file", poly_path, "polynomial JSON file")->required();
    poly_test->add_option("--order", poly_order, "comma-separated elimination order");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitUsage;
    }

    if (cfg.parallel > 0) set_thread_count(cfg.parallel);
    if (cfg.precision_cap < cfg.precision_bits) {
        std::cerr << "precision cap below precision bits\n";
        return kExitUsage;
    }

    try {
        if (bridge_eval->parsed()) return cmd_bridge_eval(cfg, bridge_t);
        if (bridge_invert->parsed()) return cmd_bridge_invert(cfg, invert_x, invert_tol);
        if (bellman_eval->parsed()) return cmd_bellman_eval(cfg, bellman_x);
        if (extremal_build->parsed()) return cmd_extremal_build(cfg, extremal_t, verify, haar);
        if (certify->parsed()) {
            const auto ids = pipeline_ids();
            if (cert_id != "all" &&
                std::find(ids.begin(), ids.end(), cert_id) == ids.end()) {
                std::cerr << "unknown pipeline '" << cert_id << "'\n";
                return kExitUsage;
            }
            return cmd_certify(cfg, cert_id, cert_out);
        }
        if (plot_bridge->parsed()) {
            if (plot_level > 14) throw DomainError("plot level capped at 14");
            return cmd_plot_bridge(cfg, plot_level);
        }
        if (plot_bellman->parsed()) {
            if (bellman_level > 14) throw DomainError("plot level capped at 14");
            return cmd_plot_bellman(cfg, bellman_level);
        }
        if (plot_oracle->parsed()) return cmd_plot_oracle(cfg, oracle_depth, oracle_xgrid,
                                                          oracle_taugrid);
        if (poly_test->parsed()) return cmd_poly_test(cfg, poly_path, poly_order);
        std::cerr << "missing subcommand\n";
        return kExitUsage;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const InconclusiveError& e) {
        std::cerr << "inconclusive at precision cap: " << e.what() << "\n";
        return kExitInconclusive;
    } catch (const IndeterminateError& e) {
        std::cerr << "indeterminate: " << e.what() << "\n";
        return kExitInconclusive;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
