// Command-line front end: one subcommand per library entry point, JSON reports.

#include "CLI11.hpp"
#include "json.hpp"

#include "yoccoz/error.hpp"
#include "yoccoz/geometry.hpp"
#include "yoccoz/lamination.hpp"
#include "yoccoz/puzzle.hpp"
#include "yoccoz/qcmodel.hpp"
#include "yoccoz/renorm.hpp"
#include "yoccoz/sobolev.hpp"
#include "yoccoz/tiling.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>

using json = nlohmann::json;
using namespace yoccoz;

namespace {

constexpr const char* kVersion = "0.1.0";

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r"), b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
}

// key=value lines; '#' starts a comment.
std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config file " + path);
    std::vector<std::pair<std::string, std::string>> kv;
    std::string line;
    for (int n = 1; std::getline(in, line); ++n) {
        line = trim(line.substr(0, line.find('#')));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw UsageError(path + ":" + std::to_string(n) + ": expected key=value");
        kv.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return kv;
}

Angle parse_angle(const std::string& s) {
    try {
        return Angle::parse(s);
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        throw Error("invalid-argument", "not an angle: " + s);
    }
}

std::vector<std::string> angle_strings(const std::vector<Angle>& v) {
    std::vector<std::string> out;
    for (const auto& a : v) out.push_back(a.str());
    return out;
}

json piece_json(const PieceRef& p) {
    return {{"level", p.level}, {"anchor", p.anchor.angle.str()}, {"critical", p.anchor.critical}};
}

json vec_json(Vec2 v) { return json::array({v.x, v.y}); }

// Effective value of every option of the subcommand chain, for the report.
void collect_config(const CLI::App* app, json& out) {
    for (const CLI::Option* opt : app->get_options()) {
        const std::string name = opt->get_single_name();
        if (name.empty() || name == "help" || name == "version" || name == "config" || name == "out") continue;
        if (opt->count() > 0 && opt->get_items_expected_max() <= 1) {
            out[name] = opt->as<std::string>();
        } else if (opt->count() > 0) {
            auto r = opt->results();
            std::string v;
            for (std::size_t i = 0; i < r.size(); ++i) v += (i ? "," : "") + r[i];
            out[name] = v;
        } else {
            out[name] = opt->get_default_str();
        }
    }
    for (const CLI::App* sub : app->get_subcommands()) collect_config(sub, out);
}

struct Common {
    unsigned p = 1, q = 2;
    std::string theta_v;
    std::size_t depth = 0;
};

void add_parameter(CLI::App* s, Common& c, std::size_t default_depth) {
    c.depth = default_depth;
    s->add_option("--p", c.p, "rotation numerator")->capture_default_str();
    s->add_option("--q", c.q, "rotation denominator")->capture_default_str()->check(CLI::Range(2u, 64u));
    s->add_option("--theta-v", c.theta_v, "critical value angle num/den")->required();
    s->add_option("--depth", c.depth, "lamination depth")->capture_default_str()->check(CLI::PositiveNumber);
}

Complex parse_c(double re, double im) { return {re, im}; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Yoccoz puzzle combinatorics, ray geometry and quasiconformal model maps"};
    app.set_version_flag("--version", std::string("yoccoz ") + kVersion);
    app.require_subcommand(1);
    app.fallthrough();  // --config and --out also after the subcommand
    std::string config_path, out_path, cache_dir;
    app.add_option("--config", config_path, "key=value file with option defaults");
    app.add_option("--out", out_path, "write the report here instead of stdout");

    // One parameter block per subcommand: defaults differ between them.
    std::map<std::string, Common> params;
    std::size_t qc_depth = 0;
    std::string angle = "critical", theta, a0, a1;
    std::size_t n_max = 40, level = 8, budget = 0, max_tile_level = 0, n = 1, pixels = 800, grid = 512, samples = 16,
                trials = 20, steps = 8;
    std::uint64_t seed = 1;
    std::vector<std::string> angles;
    double c_re = 0.0, c_im = 0.0, pot_hi = 2.0, pot_lo = 1e-4;

    auto* lam_cmd = app.add_subcommand("lamination", "pullback lamination polygons by depth");
    add_parameter(lam_cmd, params["lamination"], 6);

    auto* tau_cmd = app.add_subcommand("tau", "tau sequence of an angle or of the critical point");
    add_parameter(tau_cmd, params["tau"], 40);
    tau_cmd->add_option("--angle", angle, "num/den or 'critical'")->capture_default_str();
    tau_cmd->add_option("--n-max", n_max, "last level")->capture_default_str();

    auto* desc_cmd = app.add_subcommand("descendants", "critical annuli: degeneracy, children, descendants");
    add_parameter(desc_cmd, params["descendants"], 30);
    desc_cmd->add_option("--n", n, "annulus level")->capture_default_str();
    desc_cmd->add_option("--budget", budget, "search budget (0: depth)")->capture_default_str();

    auto* tile_cmd = app.add_subcommand("tile", "tiling of a critical piece");
    auto* cert_cmd = app.add_subcommand("certify", "tiling plus a surrounding-annuli certificate");
    for (auto* s : {tile_cmd, cert_cmd}) {
        add_parameter(s, params[s->get_name()], 30);
        s->add_option("--level", level, "level of the critical piece")->capture_default_str();
        s->add_option("--budget", budget, "orbit budget (0: depth)")->capture_default_str();
        s->add_option("--max-tile-level", max_tile_level, "deepest tile (0: level + 4)")->capture_default_str();
    }
    cert_cmd->add_option("--angles", angles, "residual angles to certify")->required()->delimiter(',');

    auto* renorm_cmd = app.add_subcommand("renorm", "combinatorial renormalization search");
    add_parameter(renorm_cmd, params["renorm"], 30);
    renorm_cmd->add_option("--budget", budget, "largest period (0: depth)")->capture_default_str();

    auto* tune_cmd = app.add_subcommand("tune", "binary digit substitution 0 -> a0, 1 -> a1");
    tune_cmd->add_option("--a0", a0, "word replacing 0")->required();
    tune_cmd->add_option("--a1", a1, "word replacing 1")->required();
    tune_cmd->add_option("--theta", theta, "angle num/den or expansion like 0.01(10)")->required();

    auto* trace_cmd = app.add_subcommand("trace", "external ray polyline");
    trace_cmd->add_option("--c-re", c_re)->capture_default_str();
    trace_cmd->add_option("--c-im", c_im)->capture_default_str();
    trace_cmd->add_option("--theta", theta, "ray angle num/den")->required();
    trace_cmd->add_option("--pot-hi", pot_hi)->capture_default_str()->check(CLI::PositiveNumber);
    trace_cmd->add_option("--pot-lo", pot_lo)->capture_default_str()->check(CLI::PositiveNumber);
    trace_cmd->add_option("--steps", steps, "samples per halving of the potential")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    trace_cmd->add_option("--cache-dir", cache_dir, "ray cache (default: $YOCCOZ_CACHE_DIR)");

    auto* render_cmd = app.add_subcommand("render", "SVG of the puzzle at one level");
    add_parameter(render_cmd, params["render"], 8);
    render_cmd->add_option("--c-re", c_re)->required();
    render_cmd->add_option("--c-im", c_im)->capture_default_str();
    render_cmd->add_option("--level", level)->capture_default_str();
    render_cmd->add_option("--pixels", pixels)->capture_default_str()->check(CLI::PositiveNumber);

    auto* qc_cmd = app.add_subcommand("qc", "quasiconformal model maps");
    qc_cmd->require_subcommand(1);
    auto* phi_cmd = qc_cmd->add_subcommand("phi", "square smashing map: per-cell dilatations");
    phi_cmd->add_option("--depth", qc_depth)->required()->check(CLI::PositiveNumber);
    auto* dia_cmd = qc_cmd->add_subcommand("diamond", "dilatation of the diamond-to-strip map on a grid");
    dia_cmd->add_option("--grid", grid)->capture_default_str()->check(CLI::PositiveNumber);
    auto* strip_cmd = qc_cmd->add_subcommand("strip", "slit images in the strip model");
    strip_cmd->add_option("--depth", qc_depth)->required()->check(CLI::PositiveNumber);
    strip_cmd->add_option("--samples", samples)->capture_default_str()->check(CLI::PositiveNumber);

    auto* sob_cmd = app.add_subcommand("sobolev", "energy checks");
    sob_cmd->require_subcommand(1);
    auto* verify_cmd = sob_cmd->add_subcommand("verify", "slit-bound chain on random test functions");
    verify_cmd->add_option("--depth", qc_depth)->required()->check(CLI::PositiveNumber);
    verify_cmd->add_option("--trials", trials)->capture_default_str()->check(CLI::PositiveNumber);
    verify_cmd->add_option("--seed", seed)->capture_default_str();

    // Config values become flags right after the subcommand chain, so that
    // flags given on the command line (parsed later) override them.
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        std::string cfg;
        for (std::size_t i = 0; i < args.size(); ++i) {
            if (args[i] == "--config" && i + 1 < args.size()) cfg = args[i + 1];
            else if (args[i].rfind("--config=", 0) == 0) cfg = args[i].substr(9);
        }
        if (!cfg.empty()) {
            std::size_t pos = 0;
            CLI::App* target = nullptr;
            for (std::size_t i = 0; i < args.size(); ++i) {
                if (args[i] == "--config" || args[i] == "--out") {
                    ++i;
                    continue;
                }
                if (args[i].rfind("--", 0) == 0) continue;
                CLI::App* base = target ? target : &app;
                CLI::App* sub = base->get_subcommand_no_throw(args[i]);
                if (!sub) break;
                target = sub;
                pos = i + 1;
            }
            if (!target) throw UsageError("--config needs a subcommand");
            std::vector<std::string> extra;
            for (const auto& [k, v] : read_config(cfg)) {
                if (k == "config" || k == "out" || !target->get_option_no_throw("--" + k))
                    throw UsageError("unknown config key '" + k + "' for " + target->get_name());
                extra.push_back("--" + k + "=" + v);
            }
            args.insert(args.begin() + long(pos), extra.begin(), extra.end());
        }
        std::function<void(CLI::App*)> last_wins = [&](CLI::App* a) {
            for (CLI::Option* o : a->get_options())
                if (o->get_items_expected_max() <= 1) o->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
            for (CLI::App* s : a->get_subcommands({})) last_wins(s);
        };
        last_wins(&app);
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const UsageError& e) {
        std::cerr << "yoccoz: " << e.what() << "\n";
        return 2;
    }

    json report;
    report["tool"] = "yoccoz";
    report["version"] = kVersion;
    json cfg = json::object();
    collect_config(&app, cfg);
    report["config"] = cfg;

    std::string text;
    try {
        json r;
        Common cm;
        for (const auto& [name, c] : params)
            if (app.got_subcommand(name)) cm = c;
        auto lam_for = [&](std::optional<std::size_t> store) {
            return Lamination::build(cm.p, cm.q, parse_angle(cm.theta_v), cm.depth, store);
        };
        if (lam_cmd->parsed()) {
            report["command"] = "lamination";
            auto lam = lam_for(std::nullopt);
            r["alpha"] = angle_strings(lam.alpha());
            r["sector"] = {lam.A().str(), lam.D().str()};
            r["critical_leaf"] = {lam.critical_leaf()[0].str(), lam.critical_leaf()[1].str()};
            json counts = json::array(), polys = json::array();
            for (std::size_t d = 0; d <= lam.stored_depth(); ++d) {
                counts.push_back(lam.polygons(d).size());
                json level = json::array();
                for (const auto& poly : lam.polygons(d)) level.push_back(angle_strings(poly.vertices));
                polys.push_back(level);
            }
            r["polygons_per_depth"] = counts;
            r["polygons"] = polys;
        } else if (tau_cmd->parsed()) {
            report["command"] = "tau";
            auto lam = lam_for(0);
            Point x = angle == "critical" ? Point::critical_point(lam) : Point::at(parse_angle(angle));
            r["angle"] = x.angle.str();
            r["critical"] = x.critical;
            r["tau"] = tau_sequence(lam, x, n_max);
        } else if (desc_cmd->parsed()) {
            report["command"] = "descendants";
            auto lam = lam_for(0);
            const std::size_t b = budget ? budget : cm.depth;
            json degenerate = json::array();
            for (std::size_t k = 0; k < cm.depth; ++k) degenerate.push_back(annulus_degenerate(lam, k));
            r["degenerate"] = degenerate;
            r["first_nondegenerate"] = first_nondegenerate(lam);
            auto child = first_child(lam, n, b);
            r["first_child"] = child ? json(*child) : json(nullptr);
            try {
                auto [d1, d2] = fraternal_descendants(lam, n, b);
                r["fraternal"] = {d1, d2};
            } catch (const Error& e) {
                r["fraternal"] = {{"error", e.code()}};
            }
            r["n"] = n;
        } else if (tile_cmd->parsed() || cert_cmd->parsed()) {
            report["command"] = tile_cmd->parsed() ? "tile" : "certify";
            const Angle tv = parse_angle(cm.theta_v);
            const std::size_t b = budget ? budget : cm.depth;
            auto info = classify_case(cm.p, cm.q, tv, cm.depth, b);
            r["case"] = to_string(info.tag);
            r["evidence_depth"] = info.evidence_depth;
            if (info.alpha_time) r["alpha_time"] = *info.alpha_time;
            if (info.avoided_level) r["avoided_level"] = *info.avoided_level;
            std::optional<Lamination> lam;
            Tiling t;
            if (info.tag == CaseTag::TrivialCase1) {
                PieceRef piece{level, Point{tv.halves().first, true}};
                t = tile_trivial(piece, *info.alpha_time);
            } else {
                lam = lam_for(0);
                TileOptions opt;
                opt.max_tile_level = max_tile_level;
                opt.budget = budget;
                t = tile(*lam, level, opt);
            }
            r["L"] = t.L;
            r["piece"] = piece_json(t.piece);
            json tiles = json::array();
            for (const auto& tl : t.tiles) tiles.push_back(piece_json(tl.piece));
            r["tiles"] = tiles;
            r["residual"] = {{"p", t.residual_p},
                             {"L", t.residual_L},
                             {"empty", t.residual_empty},
                             {"critical_point_only", t.residual_is_critical_point}};
            r["max_tile_level"] = t.max_tile_level;
            r["unresolved"] = t.unresolved;
            r["N"] = t.N;
            r["n1"] = t.n1;
            r["n2"] = t.n2;
            if (cert_cmd->parsed()) {
                if (!lam) throw Error("nothing-to-certify", "the residual set is empty in the trivial case");
                std::vector<Angle> rs;
                for (const auto& s : angles) rs.push_back(parse_angle(s));
                auto cert = build_certificate(*lam, t, rs, cm.depth);
                auto v = verify_certificate(*lam, cert);
                json entries = json::array();
                for (std::size_t i = 0; i < cert.entries.size(); ++i) {
                    json an = json::array();
                    for (const auto& a : cert.entries[i].annuli) an.push_back({{"n", a.n}, {"m", a.m}, {"class", a.cls}});
                    json counts = json::array();
                    if (i < v.class_counts.size())
                        for (const auto& [c, k] : v.class_counts[i]) counts.push_back({c, k});
                    entries.push_back({{"theta", cert.entries[i].theta.str()}, {"annuli", an}, {"class_counts", counts}});
                }
                r["certificate"] = {{"base_level", cert.base_level},
                                    {"n1", cert.n1},
                                    {"n2", cert.n2},
                                    {"depth", cert.depth},
                                    {"entries", entries},
                                    {"pass", v.pass},
                                    {"vacuous", v.vacuous},
                                    {"warnings", v.warnings},
                                    {"failures", v.failures}};
            }
        } else if (renorm_cmd->parsed()) {
            report["command"] = "renorm";
            auto rep = detect(cm.p, cm.q, parse_angle(cm.theta_v), cm.depth, budget ? budget : cm.depth);
            r["status"] = to_string(rep.status);
            r["renormalizable"] = rep.renormalizable();
            r["period"] = rep.period;
            r["witness_level"] = rep.witness_level;
            r["kind"] = to_string(rep.kind);
            r["budget"] = rep.budget;
            r["evidence_depth"] = rep.evidence_depth;
        } else if (tune_cmd->parsed()) {
            report["command"] = "tune";
            auto x = theta.find('/') != std::string::npos ? BinaryExpansion::from_angle(parse_angle(theta))
                                                          : BinaryExpansion::parse(theta);
            auto t = tune(a0, a1, x);
            r["input"] = x.str();
            r["tuned"] = t.str();
            r["tuned_canonical"] = t.canonical().str();
            r["tuned_angle"] = t.to_angle().str();
        } else if (trace_cmd->parsed()) {
            report["command"] = "trace";
            RayCache cache(cache_dir.empty() ? std::nullopt : std::optional<std::string>(cache_dir));
            auto ray = cache.get(parse_c(c_re, c_im), parse_angle(theta), pot_hi, pot_lo, unsigned(steps));
            r["ray"] = json::parse(polyline_json(ray));
        } else if (render_cmd->parsed()) {
            auto lam = lam_for(std::nullopt);
            RenderOptions opt;
            opt.pixels = pixels;
            text = render_svg(parse_c(c_re, c_im), lam, level, opt);
        } else if (phi_cmd->parsed()) {
            report["command"] = "qc phi";
            PhiMap phi(qc_depth);
            r["cells"] = phi.atlas().cells().size();
            r["max_dilatation"] = phi.atlas().max_dilatation();
            r["distinct_dilatations"] = phi.atlas().distinct_dilatations();
            json cantor = json::array();
            for (double x : {0.25, 0.5, 0.75}) cantor.push_back({x, PhiMap::boundary_value(x)});
            r["boundary_values"] = cantor;
        } else if (dia_cmd->parsed()) {
            report["command"] = "qc diamond";
            auto d = diamond_dilatation_grid(grid);
            r["samples"] = d.samples;
            r["max"] = d.max;
            r["argmax"] = vec_json(d.argmax);
            r["above_three"] = d.above_three;
            r["expected_max"] = (3 + std::sqrt(5.0)) / 2;
        } else if (strip_cmd->parsed()) {
            report["command"] = "qc strip";
            auto m = strip_model(qc_depth, samples);
            json slits = json::array();
            double lo = 1e300, hi = -1e300;
            for (const auto& s : m.slits) {
                slits.push_back({{"level", s.level}, {"x", s.x}, {"im", {s.im_lo, s.im_hi}}, {"x_spread", s.x_spread}});
                lo = std::min(lo, s.im_lo);
                hi = std::max(hi, s.im_hi);
            }
            r["slits"] = slits;
            r["im_range"] = {lo, hi};
            r["band"] = {std::numbers::pi / 5, 4 * std::numbers::pi / 5};
        } else if (verify_cmd->parsed()) {
            report["command"] = "sobolev verify";
            auto m = strip_model(qc_depth);
            auto rep = verify_slitbounds(m, trials, seed);
            r["trials"] = rep.trials;
            r["skipped"] = rep.skipped;
            r["violations"] = rep.violations;
            r["link_failures"] = rep.link_failures;
            r["single_weight_cross_failures"] = rep.single_weight_failures;
            r["B_proof"] = std::sqrt(rep.b_proof2);
            r["B_empirical"] = std::sqrt(rep.b_empirical2);
            r["squeeze_max"] = rep.squeeze_max;
            r["identity_residual_max"] = rep.identity_residual_max;
            r["log"] = rep.log;
            json runs = json::array();
            for (const auto& t : rep.runs)
                runs.push_back({{"I", t.I},
                                {"extension_norm2", t.extension_norm2},
                                {"squeeze", {t.squeeze_bottom, t.squeeze_top}},
                                {"links",
                                 {{"bottom", t.link_bottom},
                                  {"top", t.link_top},
                                  {"cross", t.link_cross},
                                  {"cross_single_weight", t.link_cross_single},
                                  {"trace", t.link_trace}}}});
            r["runs"] = runs;
        }
        if (text.empty()) {
            report["result"] = r;
            text = report.dump(2) + "\n";
        }
    } catch (const Error& e) {
        std::cout << json{{"error", {{"code", e.code()}, {"message", e.what()}}}}.dump(2) << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cout << json{{"error", {{"code", "internal"}, {"message", e.what()}}}}.dump(2) << "\n";
        return 1;
    }

    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(out_path, std::ios::binary);
        if (!f) {
            std::cout << json{{"error", {{"code", "io"}, {"message", "cannot write " + out_path}}}}.dump(2) << "\n";
            return 1;
        }
        f << text;
    }
    return 0;
}
