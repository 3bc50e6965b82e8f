// reebstrip: Reeb graphs of the height function on the strip between two
// function graphs, with certification utilities. Outputs JSON (DOT/SVG for
// the graph) with the run configuration embedded for reproducibility.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "reebstrip/constructions.hpp"
#include "reebstrip/manifold.hpp"
#include "reebstrip/oracle.hpp"
#include "reebstrip/reeb.hpp"
#include "reebstrip/stability.hpp"
#include "reebstrip/version.hpp"

using nlohmann::json;
using namespace reebstrip;

namespace {

struct FnSource {
    std::string expr;
    std::string spec_path;

    TSFunction load(const char* flag) const {
        if (!expr.empty()) return from_expr_text(expr);
        if (!spec_path.empty()) {
            std::ifstream in(spec_path);
            if (!in) throw std::runtime_error(std::string("cannot open ") + spec_path);
            json spec = json::parse(in);
            return from_spec_json(spec);
        }
        throw CLI::ValidationError(std::string(flag) + ": expression or spec file required");
    }
    json config() const {
        if (!expr.empty()) return expr;
        return json{{"spec", spec_path}};
    }
};

void add_fn_flags(CLI::App* cmd, const std::string& name, FnSource& src, bool required = true) {
    auto* a = cmd->add_option("--" + name, src.expr, "expression for " + name);
    auto* b = cmd->add_option("--" + name + "-spec", src.spec_path,
                              "construction spec JSON file for " + name);
    a->excludes(b);
    if (required) {
        // presence of one of the two is validated at load time
    }
}

json provenance(const std::string& command, json config) {
    return {{"tool", "reebstrip"}, {"version", kVersion}, {"command", command},
            {"config", std::move(config)}};
}

void emit(const std::string& out_path, const std::string& payload) {
    if (out_path.empty() || out_path == "-") {
        std::cout << payload;
        if (payload.empty() || payload.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    out << payload;
}

void emit_json(const std::string& out_path, json j) { emit(out_path, j.dump(2) + "\n"); }

std::vector<double> parse_list(const std::string& csv) {
    std::vector<double> out;
    size_t pos = 0;
    while (pos < csv.size()) {
        size_t next = csv.find(',', pos);
        if (next == std::string::npos) next = csv.size();
        const std::string tok = csv.substr(pos, next - pos);
        if (!tok.empty()) out.push_back(std::stod(tok));
        pos = next + 1;
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reeb graphs of strips between function graphs"};
    app.require_subcommand(1);

    FnSource c1, c2, fn, c0;
    std::vector<double> window{-7.0, 7.0};
    std::vector<double> heights;
    std::string out_path, format = "json", zf_csv, params_text = "{}";
    std::string name, theorem;
    double at = 0.0, shift = 1.0, ac = 0.5;
    std::vector<double> bounds{1.0, 1.5}, preimage{-100.0, 100.0};
    int m_dim = 2, n_samples = 10000, n_t = 4096, n_s = 8192;
    uint64_t seed = 1;
    std::string dump_path;

    auto add_window = [&](CLI::App* cmd) {
        cmd->add_option("--window", window, "s-window [lo hi]")->expected(2);
    };

    auto* cmd_eval = app.add_subcommand("eval", "evaluate an expression jet");
    add_fn_flags(cmd_eval, "fn", fn);
    cmd_eval->add_option("--at", at, "evaluation point")->required();
    cmd_eval->add_option("--out", out_path, "output file");

    auto* cmd_crit = app.add_subcommand("critical", "detect the critical set");
    add_fn_flags(cmd_crit, "fn", fn);
    add_window(cmd_crit);
    cmd_crit->add_option("--out", out_path, "output file");

    auto* cmd_reeb = app.add_subcommand("reeb", "build the Reeb digraph of the strip");
    add_fn_flags(cmd_reeb, "c1", c1);
    add_fn_flags(cmd_reeb, "c2", c2);
    add_window(cmd_reeb);
    cmd_reeb->add_option("--heights", heights, "height range [lo hi]")->expected(2);
    cmd_reeb->add_option("--format", format, "json | dot | svg");
    cmd_reeb->add_option("--out", out_path, "output file");

    auto* cmd_pred = app.add_subcommand("predict", "vertex prediction for (c1, c1 + a)");
    add_fn_flags(cmd_pred, "c1", c1);
    add_window(cmd_pred);
    cmd_pred->add_option("--a", shift, "vertical shift (0 < a < gap)")->required();
    cmd_pred->add_option("--out", out_path, "output file");

    auto* cmd_cw = app.add_subcommand("check-cw", "CW hypothesis checks");
    add_fn_flags(cmd_cw, "c1", c1);
    add_fn_flags(cmd_cw, "c2", c2);
    add_window(cmd_cw);
    cmd_cw->add_option("--zf", zf_csv, "declared Z_F points, comma separated");
    cmd_cw->add_option("--out", out_path, "output file");

    auto* cmd_con = app.add_subcommand("construct", "catalogue entries, pairs, rotations");
    cmd_con->add_option("--name", name, "catalogue entry name");
    cmd_con->add_option("--theorem", theorem, "pair construction: 4 5a 5b 5c 6a 6b 6c");
    cmd_con->add_option("--params", params_text, "JSON parameter object");
    auto* rot = cmd_con->add_flag("--rotate", "rotate the graph of --c0");
    add_fn_flags(cmd_con, "c0", c0, false);
    cmd_con->add_option("--ac", ac, "rotation slope a_c");
    cmd_con->add_option("--bounds", bounds, "slope bounds a_cm a_cM")->expected(2);
    cmd_con->add_option("--preimage", preimage, "preimage window for the rotation")->expected(2);
    cmd_con->add_option("--out", out_path, "output spec file (pair: two files get .c1/.c2)");

    auto* cmd_stab = app.add_subcommand("stability", "stability classification");
    add_fn_flags(cmd_stab, "c1", c1);
    add_fn_flags(cmd_stab, "c2", c2);
    add_window(cmd_stab);
    cmd_stab->add_option("--out", out_path, "output file");

    auto* cmd_man = app.add_subcommand("manifold-check", "zero-set sampling + certification");
    add_fn_flags(cmd_man, "c1", c1);
    add_fn_flags(cmd_man, "c2", c2);
    add_window(cmd_man);
    cmd_man->add_option("--m", m_dim, "manifold dimension (>= 2)");
    cmd_man->add_option("--n", n_samples, "sample count");
    cmd_man->add_option("--seed", seed, "sampling seed");
    cmd_man->add_option("--dump", dump_path, "write samples as JSON lines");
    cmd_man->add_option("--out", out_path, "output file");

    auto* cmd_oc = app.add_subcommand("oracle-compare", "sweep vs grid oracle");
    add_fn_flags(cmd_oc, "c1", c1);
    add_fn_flags(cmd_oc, "c2", c2);
    add_window(cmd_oc);
    cmd_oc->add_option("--nt", n_t, "oracle level count");
    cmd_oc->add_option("--ns", n_s, "oracle s-lattice size");
    cmd_oc->add_option("--out", out_path, "output file");

    CLI11_PARSE(app, argc, argv);
    const Tolerances tol;

    try {
        const Window w{window[0], window[1]};

        if (cmd_eval->parsed()) {
            TSFunction f = fn.load("--fn");
            const Jet2 j = f.jet(at);
            json out = provenance("eval", {{"fn", fn.config()}, {"at", at}});
            out["jet"] = {{"value", j.v}, {"d1", j.d1}, {"d2", j.d2}, {"overflow", j.overflow}};
            emit_json(out_path, out);
            return 0;
        }
        if (cmd_crit->parsed()) {
            TSFunction f = fn.load("--fn");
            json out = provenance("critical", {{"fn", fn.config()}, {"window", window}});
            out["critical_set"] = to_json(find_critical_set(f, w, tol));
            emit_json(out_path, out);
            return 0;
        }
        if (cmd_reeb->parsed()) {
            StripRegion region = make_region(c1.load("--c1"), c2.load("--c2"), w);
            ReebOptions opts;
            opts.tol = tol;
            if (!heights.empty()) opts.heights = Window{heights[0], heights[1]};
            ReebGraph g = build_reeb_graph(region, opts);
            if (format == "dot") {
                emit(out_path, to_dot(g));
            } else if (format == "svg") {
                emit(out_path, to_svg(g, region));
            } else {
                json out = provenance("reeb", {{"c1", c1.config()},
                                               {"c2", c2.config()},
                                               {"window", window},
                                               {"heights", heights}});
                out["graph"] = to_json(g);
                emit_json(out_path, out);
            }
            return 0;
        }
        if (cmd_pred->parsed()) {
            TSFunction f = c1.load("--c1");
            const auto cs = f.critical_set(w, tol);
            json out = provenance("predict",
                                  {{"c1", c1.config()}, {"window", window}, {"a", shift}});
            out["prediction"] = to_json(predict_mthm2(*cs, shift));
            emit_json(out_path, out);
            return 0;
        }
        if (cmd_cw->parsed()) {
            StripRegion region = make_region(c1.load("--c1"), c2.load("--c2"), w);
            CWReport rep = check_cw_hypotheses(region, parse_list(zf_csv), tol);
            json out = provenance("check-cw", {{"c1", c1.config()},
                                               {"c2", c2.config()},
                                               {"window", window},
                                               {"zf", zf_csv}});
            out["report"] = to_json(rep);
            emit_json(out_path, out);
            return rep.all_hold() ? 0 : 2;
        }
        if (cmd_con->parsed()) {
            json params = json::parse(params_text);
            json cfg = {{"params", params}};
            if (*rot) {
                TSFunction f0 = c0.load("--c0");
                TSFunction rotated = rotate_graph(f0, ac, bounds[0], bounds[1],
                                                  {preimage[0], preimage[1]});
                cfg["rotate"] = {{"a_c", ac}, {"bounds", bounds}, {"preimage", preimage}};
                json out = provenance("construct", cfg);
                out["spec"] = rotated.spec_json();
                emit_json(out_path, out["spec"]);
                return 0;
            }
            if (!theorem.empty()) {
                auto [f1, f2] = build_pair(theorem, params);
                cfg["theorem"] = theorem;
                if (out_path.empty())
                    throw CLI::ValidationError("--out required for pair construction");
                emit_json(out_path + ".c1", f1.spec_json());
                emit_json(out_path + ".c2", f2.spec_json());
                return 0;
            }
            if (name.empty()) throw CLI::ValidationError("need --name, --theorem or --rotate");
            TSFunction f = catalogue(name, params);
            emit_json(out_path, f.spec_json());
            return 0;
        }
        if (cmd_stab->parsed()) {
            StripRegion region = make_region(c1.load("--c1"), c2.load("--c2"), w);
            StabilityReport rep = classify_stability(region, tol);
            json out = provenance("stability",
                                  {{"c1", c1.config()}, {"c2", c2.config()}, {"window", window}});
            out["report"] = to_json(rep);
            emit_json(out_path, out);
            return 0;
        }
        if (cmd_man->parsed()) {
            ManifoldSpec spec{m_dim, make_region(c1.load("--c1"), c2.load("--c2"), w)};
            auto samples = sample_zero_set(spec, n_samples, seed);
            if (!dump_path.empty()) {
                std::ofstream dump(dump_path);
                for (const auto& s : samples) dump << sample_to_json(spec, s).dump() << "\n";
            }
            double max_f = 0.0;
            for (const auto& s : samples) max_f = std::max(max_f, std::abs(f_jet(spec, s).F));
            const RegularityReport reg = verify_regularity(spec, samples, tol);
            const bool pass = reg.holds && max_f <= tol.zero_set;
            json out = provenance("manifold-check", {{"c1", c1.config()},
                                                     {"c2", c2.config()},
                                                     {"window", window},
                                                     {"m", m_dim},
                                                     {"n", n_samples},
                                                     {"seed", seed}});
            out["report"] = {{"samples", samples.size()},
                             {"max_abs_F", max_f},
                             {"min_grad_norm", reg.min_grad_norm},
                             {"min_boundary_margin", reg.min_boundary_margin},
                             {"separation_certificate", spec.region.separation_certificate},
                             {"holds", pass}};
            emit_json(out_path, out);
            return pass ? 0 : 2;
        }
        if (cmd_oc->parsed()) {
            StripRegion region = make_region(c1.load("--c1"), c2.load("--c2"), w);
            ReebOptions opts;
            opts.tol = tol;
            ReebGraph sweep = build_reeb_graph(region, opts);
            ReebGraph grid = grid_reeb(region, std::nullopt, n_t, n_s);
            const double tol_h = 2.0 * grid.heights.length() / n_t;
            EquivalenceResult eq = graphs_equivalent(sweep, grid, tol_h);
            json out = provenance("oracle-compare", {{"c1", c1.config()},
                                                     {"c2", c2.config()},
                                                     {"window", window},
                                                     {"nt", n_t},
                                                     {"ns", n_s}});
            out["equivalent"] = eq.equivalent;
            out["tol_h"] = tol_h;
            out["certificate"] = eq.certificate;
            emit_json(out_path, out);
            return eq.equivalent ? 0 : 2;
        }
    } catch (const CLI::ValidationError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
    return 1;
}
