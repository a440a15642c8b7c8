// lgdim command-line tool: JSON in, one JSON report on stdout.
//
// Exit codes: 0 success, 2 validation/input error (error list in JSON on
// stdout), 1 internal failure, 64 usage error.

#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lgdim/attractor.hpp"
#include "lgdim/coupling.hpp"
#include "lgdim/json_io.hpp"
#include "lgdim/measures.hpp"
#include "lgdim/scheme.hpp"
#include "lgdim/sequences.hpp"
#include "lgdim/variational.hpp"

namespace {

using lgdim::json;

// sequence option: inline JSON (starts with '{') or a path to a JSON file
lgdim::SymbolSequence load_sequence(const std::string& spec, int symbol_count) {
    if (!spec.empty() && spec.front() == '{')
        return lgdim::sequence_from_json(json::parse(spec), symbol_count);
    return lgdim::sequence_from_json(lgdim::parse_json_file(spec), symbol_count);
}

std::vector<int> parse_word(const std::string& text) {
    std::vector<int> word;
    if (text.find(',') != std::string::npos) {
        std::string cur;
        for (char ch : text + ",") {
            if (ch == ',') {
                if (!cur.empty()) word.push_back(std::stoi(cur));
                cur.clear();
            } else {
                cur.push_back(ch);
            }
        }
    } else {
        for (char ch : text) {
            if (ch < '1' || ch > '9') throw std::invalid_argument("bad word digit: " + text);
            word.push_back(ch - '0');
        }
    }
    if (word.empty()) throw std::invalid_argument("empty word");
    return word;
}

json weights_json(const lgdim::CellWeights& w) {
    json rows = json::array();
    for (const auto& row : w.p) rows.push_back(row);
    return rows;
}

json report_json(const lgdim::DimensionReport& rep) {
    return {{"dimension", rep.value},
            {"converged", rep.converged},
            {"iterations", rep.iterations},
            {"restarts_used", rep.restarts_used},
            {"gradient_norm", rep.gradient_norm},
            {"argmax", weights_json(rep.argmax)}};
}

struct OptFlags {
    lgdim::OptimizerOptions opts;

    void attach(CLI::App* cmd) {
        cmd->add_option("--restarts", opts.restarts, "optimizer restarts (default 8)");
        cmd->add_option("--max-iters", opts.max_iters, "iteration cap per restart (default 10000)");
        cmd->add_option("--seed", opts.seed, "rng seed (default 0)");
        cmd->add_option("--tol-obj", opts.tol_obj, "objective improvement tolerance (default 1e-12)");
        cmd->add_option("--tol-grad", opts.tol_grad, "tangent gradient tolerance (default 1e-8)");
        cmd->add_option("--alphabet-cap", opts.alphabet_cap,
                        "composed alphabet cap (default 20000)");
        cmd->add_option("--threads", opts.threads, "worker threads (default: hardware)");
    }

    json to_json() const {
        return {{"restarts", opts.restarts},     {"max_iters", opts.max_iters},
                {"seed", opts.seed},             {"tol_obj", opts.tol_obj},
                {"tol_grad", opts.tol_grad},     {"alphabet_cap", opts.alphabet_cap},
                {"threads", opts.threads}};
    }
};

void emit(json report) {
    std::cout << report.dump(2) << "\n";
}

json frequency_json(const lgdim::FrequencyVector& f) {
    json out = {{"entries", f.entries}};
    if (f.rational)
        out["rational"] = {{"numerators", f.rational->first}, {"denominator", f.rational->second}};
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hausdorff dimension toolkit for sequence-driven self-affine carpet schemes"};
    app.require_subcommand(1);

    // --- validate ---------------------------------------------------------
    auto* validate = app.add_subcommand("validate", "validate a scheme or family file");
    std::string validate_scheme_path, validate_family_path;
    auto* vs = validate->add_option("--scheme", validate_scheme_path, "scheme JSON file");
    validate->add_option("--family", validate_family_path, "family JSON file")->excludes(vs);

    // --- dim ---------------------------------------------------------------
    auto* dim = app.add_subcommand("dim", "maximize the dimension formula for one scheme");
    std::string dim_scheme_path;
    dim->add_option("--scheme", dim_scheme_path, "scheme JSON file")->required();
    OptFlags dim_opts;
    dim_opts.attach(dim);

    // --- dim-word ----------------------------------------------------------
    auto* dimword = app.add_subcommand("dim-word", "compose a word over a family and maximize");
    std::string dimword_family, dimword_word;
    dimword->add_option("--family", dimword_family, "family JSON file")->required();
    dimword->add_option("--word", dimword_word, "symbols, e.g. 1,2,1 or 121")->required();
    OptFlags dimword_opts;
    dimword_opts.attach(dimword);

    // --- dim-freq ----------------------------------------------------------
    auto* dimfreq = app.add_subcommand("dim-freq", "dimension at a rational frequency vector");
    std::string dimfreq_family, dimfreq_q, dimfreq_order;
    dimfreq->add_option("--family", dimfreq_family, "family JSON file")->required();
    dimfreq->add_option("--q", dimfreq_q, "rational frequencies, e.g. 1/2,1/2")->required();
    dimfreq->add_option("--word-order", dimfreq_order, "explicit period word realizing q");
    OptFlags dimfreq_opts;
    dimfreq_opts.attach(dimfreq);

    // --- dim-limit ---------------------------------------------------------
    auto* dimlimit = app.add_subcommand("dim-limit", "continuity limit along rational approximations");
    std::string dimlimit_family, dimlimit_p, dimlimit_ds;
    double dimlimit_tol = 1e-4;
    std::int64_t dimlimit_dmax = 64;
    dimlimit->add_option("--family", dimlimit_family, "family JSON file")->required();
    dimlimit->add_option("--p", dimlimit_p, "target frequencies, e.g. 0.618034,0.381966")->required();
    dimlimit->add_option("--tol", dimlimit_tol, "stop when successive values differ less");
    dimlimit->add_option("--dmax", dimlimit_dmax, "largest denominator to try (default 64)");
    dimlimit->add_option("--denominators", dimlimit_ds, "explicit comma-separated denominators");
    OptFlags dimlimit_opts;
    dimlimit_opts.attach(dimlimit);

    // --- oracle -------------------------------------------------------------
    auto* oracle = app.add_subcommand("oracle", "independent verification values");
    std::string oracle_kind, oracle_scheme, oracle_t;
    int oracle_resolution = 200, oracle_n = 0, oracle_m = 0;
    oracle->add_option("--kind", oracle_kind, "grid | mcmullen")->required();
    oracle->add_option("--scheme", oracle_scheme, "scheme JSON file (grid)");
    oracle->add_option("--resolution", oracle_resolution, "lattice subdivisions (grid, default 200)");
    oracle->add_option("--n", oracle_n, "columns (mcmullen)");
    oracle->add_option("--m", oracle_m, "rows (mcmullen)");
    oracle->add_option("--t", oracle_t, "chosen-cell counts per row (mcmullen), e.g. 2,1");

    // --- epsilon -------------------------------------------------------------
    auto* epsilon = app.add_subcommand("epsilon", "appearance-position discrepancy profile");
    std::string eps_seq, eps_p;
    int eps_k = 1;
    std::size_t eps_nmax = 100;
    epsilon->add_option("--seq", eps_seq, "sequence JSON (inline or path)")->required();
    epsilon->add_option("--k", eps_k, "symbol (1-based)")->required();
    epsilon->add_option("--nmax", eps_nmax, "profile length (default 100)");
    epsilon->add_option("--p", eps_p, "frequency vector; default: the sequence's own");

    // --- verify-tau -----------------------------------------------------------
    auto* vtau = app.add_subcommand("verify-tau", "finite-horizon inclusion exponent report");
    std::string vtau_family, vtau_omega, vtau_omegaq;
    std::uint64_t vtau_n1 = 1000, vtau_seed = 0;
    vtau->add_option("--family", vtau_family, "family JSON file")->required();
    vtau->add_option("--omega", vtau_omega, "driving sequence JSON (inline or path)")->required();
    vtau->add_option("--omega-q", vtau_omegaq, "periodic comparison sequence JSON")->required();
    vtau->add_option("--n1", vtau_n1, "approximate-square depth (default 1000)");
    vtau->add_option("--seed", vtau_seed, "seed for the sampled base word (default 0)");

    // --- verify-sandwich --------------------------------------------------------
    auto* vsand = app.add_subcommand("verify-sandwich", "transport local-dimension bracket check");
    std::string vsand_family, vsand_omega, vsand_q;
    std::uint64_t vsand_depth = 10000;
    int vsand_seeds = 32;
    double vsand_khat = 0.0, vsand_slack = 0.05;
    vsand->add_option("--family", vsand_family, "family JSON file")->required();
    vsand->add_option("--omega", vsand_omega, "driving sequence JSON (inline or path)")->required();
    vsand->add_option("--q", vsand_q, "rational frequencies, e.g. 1/2,1/2")->required();
    vsand->add_option("--depth", vsand_depth, "rectangle depth (default 10000)");
    vsand->add_option("--seeds", vsand_seeds, "independent samples (default 32)");
    vsand->add_option("--khat", vsand_khat, "fitted coupling constant (default 0)");
    vsand->add_option("--slack", vsand_slack, "additive bracket slack (default 0.05)");
    OptFlags vsand_opts;
    vsand_opts.attach(vsand);

    // --- local-dim ---------------------------------------------------------------
    auto* ldim = app.add_subcommand("local-dim", "local dimension trace of the optimal measure");
    std::string ldim_family, ldim_word;
    std::uint64_t ldim_depth = 10000;
    int ldim_seeds = 8;
    ldim->add_option("--family", ldim_family, "family JSON file")->required();
    ldim->add_option("--word", ldim_word, "period word, e.g. 1 or 1,2")->required();
    ldim->add_option("--depth", ldim_depth, "deepest ladder depth (default 10000)");
    ldim->add_option("--seeds", ldim_seeds, "independent samples (default 8)");
    OptFlags ldim_opts;
    ldim_opts.attach(ldim);

    // --- points --------------------------------------------------------------------
    auto* points = app.add_subcommand("points", "generate an attractor point cloud as CSV");
    std::string pts_family, pts_seq, pts_out, pts_mode = "exhaustive";
    std::uint64_t pts_depth = 8, pts_count = 100000, pts_seed = 0;
    points->add_option("--family", pts_family, "family JSON file")->required();
    points->add_option("--seq", pts_seq, "sequence JSON (inline or path)")->required();
    points->add_option("--depth", pts_depth, "generation depth (default 8)");
    points->add_option("--mode", pts_mode, "exhaustive | sampled (default exhaustive)");
    points->add_option("--count", pts_count, "samples in sampled mode (default 1e5)");
    points->add_option("--seed", pts_seed, "seed in sampled mode (default 0)");
    points->add_option("--out", pts_out, "output CSV path")->required();

    // --- boxcount --------------------------------------------------------------------
    auto* boxcount = app.add_subcommand("boxcount", "box-counting slope of a point cloud");
    std::string box_in;
    int box_kmin = 2, box_kmax = 10;
    boxcount->add_option("--points", box_in, "CSV point cloud path")->required();
    boxcount->add_option("--kmin", box_kmin, "smallest dyadic exponent (default 2)");
    boxcount->add_option("--kmax", box_kmax, "largest dyadic exponent (default 10)");

    // --- render ----------------------------------------------------------------------
    auto* render = app.add_subcommand("render", "rasterize a point cloud to binary PGM");
    std::string render_in, render_out;
    int render_res = 512;
    render->add_option("--points", render_in, "CSV point cloud path")->required();
    render->add_option("--resolution", render_res, "square raster size (default 512)");
    render->add_option("--out", render_out, "output PGM path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 64;
    }

    try {
        if (*validate) {
            json report = {{"command", "validate"}};
            try {
                if (!validate_scheme_path.empty()) {
                    const auto s = lgdim::scheme_from_json(lgdim::parse_json_file(validate_scheme_path));
                    report["valid"] = true;
                    report["strictly_separated"] = s.strictly_separated();
                    report["alphabet_size"] = s.alphabet_size();
                    report["rows"] = s.row_count();
                } else if (!validate_family_path.empty()) {
                    const auto fam = lgdim::family_from_json(lgdim::parse_json_file(validate_family_path));
                    report["valid"] = true;
                    report["schemes"] = fam.size();
                    json sizes = json::array();
                    for (const auto& s : fam.schemes) sizes.push_back(s.alphabet_size());
                    report["alphabet_sizes"] = sizes;
                } else {
                    throw std::invalid_argument("validate needs --scheme or --family");
                }
            } catch (const lgdim::ValidationError& e) {
                report["valid"] = false;
                json errors = json::array();
                for (const auto& issue : e.issues())
                    errors.push_back({{"where", issue.where},
                                      {"condition", issue.condition},
                                      {"message", issue.message}});
                report["errors"] = errors;
                emit(report);
                return 2;
            }
            emit(report);
            return 0;
        }

        if (*dim) {
            const auto scheme = lgdim::scheme_from_json(lgdim::parse_json_file(dim_scheme_path));
            const auto rep = lgdim::maximize_dimension(scheme, dim_opts.opts);
            json report = report_json(rep);
            report["command"] = "dim";
            report["config"] = dim_opts.to_json();
            report["config"]["scheme"] = dim_scheme_path;
            emit(report);
            return 0;
        }

        if (*dimword) {
            const auto fam = lgdim::family_from_json(lgdim::parse_json_file(dimword_family));
            const auto word = parse_word(dimword_word);
            const auto composed = lgdim::compose_word(fam, word, dimword_opts.opts.alphabet_cap);
            const auto rep = lgdim::maximize_dimension(composed, dimword_opts.opts);
            json report = report_json(rep);
            report["command"] = "dim-word";
            report["word"] = word;
            report["composed_alphabet"] = composed.alphabet_size();
            report["config"] = dimword_opts.to_json();
            report["config"]["family"] = dimword_family;
            emit(report);
            return 0;
        }

        if (*dimfreq) {
            const auto fam = lgdim::family_from_json(lgdim::parse_json_file(dimfreq_family));
            const auto q = lgdim::frequencies_from_string(dimfreq_q);
            std::vector<int> order;
            if (!dimfreq_order.empty()) order = parse_word(dimfreq_order);
            const auto fd = lgdim::dim_of_rational_frequency(fam, q, dimfreq_opts.opts, order);
            json report = report_json(fd.report);
            report["command"] = "dim-freq";
            report["q"] = frequency_json(fd.q);
            report["word"] = fd.word;
            report["config"] = dimfreq_opts.to_json();
            report["config"]["family"] = dimfreq_family;
            emit(report);
            return 0;
        }

        if (*dimlimit) {
            const auto fam = lgdim::family_from_json(lgdim::parse_json_file(dimlimit_family));
            const auto p = lgdim::frequencies_from_string(dimlimit_p);
            std::vector<std::int64_t> ds;
            if (!dimlimit_ds.empty())
                for (int d : parse_word(dimlimit_ds)) ds.push_back(d);
            const auto rep =
                lgdim::dim_of_frequency_limit(fam, p, dimlimit_tol, dimlimit_opts.opts, ds,
                                              dimlimit_dmax);
            json trace = json::array();
            for (const auto& e : rep.trace)
                trace.push_back({{"denominator", e.denominator},
                                 {"q", frequency_json(e.q)},
                                 {"delta", e.delta},
                                 {"dimension", e.value}});
            json report = {{"command", "dim-limit"},
                           {"dimension", rep.value},
                           {"converged", rep.converged},
                           {"trace", trace},
                           {"config", dimlimit_opts.to_json()}};
            report["config"]["family"] = dimlimit_family;
            report["config"]["p"] = p.entries;
            report["config"]["tol"] = dimlimit_tol;
            emit(report);
            return 0;
        }

        if (*oracle) {
            json report = {{"command", "oracle"}, {"kind", oracle_kind}};
            if (oracle_kind == "grid") {
                if (oracle_scheme.empty()) throw std::invalid_argument("grid oracle needs --scheme");
                const auto scheme = lgdim::scheme_from_json(lgdim::parse_json_file(oracle_scheme));
                report["value"] = lgdim::grid_search_oracle(scheme, oracle_resolution);
                report["resolution"] = oracle_resolution;
            } else if (oracle_kind == "mcmullen") {
                std::vector<int> t = parse_word(oracle_t);
                report["value"] = lgdim::mcmullen_oracle(oracle_n, oracle_m, t);
                report["n"] = oracle_n;
                report["m"] = oracle_m;
                report["t"] = t;
            } else {
                throw std::invalid_argument("unknown oracle kind: " + oracle_kind);
            }
            emit(report);
            return 0;
        }

        if (*epsilon) {
            const auto seq = load_sequence(eps_seq, 0);
            const auto P = eps_p.empty() ? seq.frequencies() : lgdim::frequencies_from_string(eps_p);
            const auto prof = lgdim::epsilon_profile(seq, P, eps_k, eps_nmax);
            json report = {{"command", "epsilon"},
                           {"k", eps_k},
                           {"n_max", eps_nmax},
                           {"p", P.entries},
                           {"eps", prof.eps},
                           {"envelope", prof.envelope}};
            emit(report);
            return 0;
        }

        if (*vtau) {
            const auto fam = lgdim::family_from_json(lgdim::parse_json_file(vtau_family));
            const auto omega = load_sequence(vtau_omega, static_cast<int>(fam.size()));
            const auto omega_q = load_sequence(vtau_omegaq, static_cast<int>(fam.size()));
            // generous base: covers the approximate square and the chi spread
            const auto base_len = static_cast<std::size_t>(static_cast<double>(vtau_n1) * 6 + 64);
            const auto base = lgdim::sample_address_word(fam, omega_q, base_len, vtau_seed);
            const auto rep = lgdim::inclusion_exponent_report(fam, omega, omega_q, base, vtau_n1);
            json ladder = json::array();
            for (const auto& pt : rep.ladder)
                ladder.push_back({{"n1", pt.n1},
                                  {"n2", pt.n2},
                                  {"r1", pt.r1},
                                  {"r2", pt.r2},
                                  {"s1", pt.s1},
                                  {"s2", pt.s2},
                                  {"e_outer_width", pt.e_outer_width},
                                  {"e_inner_width", pt.e_inner_width},
                                  {"e_outer_height", pt.e_outer_height},
                                  {"e_inner_height", pt.e_inner_height},
                                  {"epsilon", pt.epsilon}});
            json report = {{"command", "verify-tau"}, {"delta", rep.delta},
                           {"khat", rep.khat},       {"khat_r2", rep.khat_r2},
                           {"residuals", rep.residuals}, {"ladder", ladder},
                           {"config", {{"n1", vtau_n1}, {"seed", vtau_seed},
                                       {"family", vtau_family}}}};
            emit(report);
            return 0;
        }

        if (*vsand) {
            const auto fam = lgdim::family_from_json(lgdim::parse_json_file(vsand_family));
            const auto omega = load_sequence(vsand_omega, static_cast<int>(fam.size()));
            const auto q = lgdim::frequencies_from_string(vsand_q);
            const auto rep = lgdim::sandwich_check(fam, omega, q, vsand_depth, vsand_seeds,
                                                   vsand_khat, vsand_slack, vsand_opts.opts);
            json seeds = json::array();
            for (const auto& s : rep.seeds)
                seeds.push_back({{"seed", s.seed},
                                 {"n1", s.n1},
                                 {"n2", s.n2},
                                 {"r1", s.r1},
                                 {"r2", s.r2},
                                 {"s1", s.s1},
                                 {"s2", s.s2},
                                 {"ratio_outer", s.ratio_outer},
                                 {"ratio_inner", s.ratio_inner}});
            json report = {{"command", "verify-sandwich"},
                           {"dimension", rep.dimension},
                           {"delta", rep.delta},
                           {"bracket", {{"lo", rep.lo}, {"hi", rep.hi}}},
                           {"min_ratio", rep.min_ratio},
                           {"max_ratio", rep.max_ratio},
                           {"median_ratio", rep.median_ratio},
                           {"within_bracket", rep.within_bracket},
                           {"seeds", seeds},
                           {"config", vsand_opts.to_json()}};
            report["config"]["depth"] = vsand_depth;
            report["config"]["khat"] = vsand_khat;
            report["config"]["slack"] = vsand_slack;
            emit(report);
            return 0;
        }

        if (*ldim) {
            const auto fam = lgdim::family_from_json(lgdim::parse_json_file(ldim_family));
            const auto word = parse_word(ldim_word);
            const auto mu = lgdim::PeriodMeasure::optimal(fam, word, ldim_opts.opts);
            std::vector<std::uint64_t> depths;
            for (std::uint64_t d = std::max<std::uint64_t>(10, ldim_depth / 100); d < ldim_depth;
                 d *= 10)
                depths.push_back(d);
            depths.push_back(ldim_depth);
            json per_seed = json::array();
            std::vector<double> finals;
            for (int s = 1; s <= ldim_seeds; ++s) {
                const auto trace = lgdim::local_dimension_trace(
                    mu, lgdim::rng::substream(ldim_opts.opts.seed, static_cast<std::uint64_t>(s)),
                    depths);
                json pts = json::array();
                for (const auto& pt : trace.points)
                    pts.push_back({{"n1", pt.n1},
                                   {"n2", pt.n2},
                                   {"log_mu", pt.log_mu},
                                   {"log_d1", pt.log_d1},
                                   {"ratio", pt.ratio}});
                per_seed.push_back(pts);
                finals.push_back(trace.final_ratio);
            }
            std::sort(finals.begin(), finals.end());
            json report = {{"command", "local-dim"},
                           {"dimension", mu.report().value},
                           {"median_final_ratio", finals[finals.size() / 2]},
                           {"final_ratios", finals},
                           {"traces", per_seed},
                           {"config", ldim_opts.to_json()}};
            report["config"]["word"] = word;
            report["config"]["depth"] = ldim_depth;
            report["config"]["seeds"] = ldim_seeds;
            emit(report);
            return 0;
        }

        if (*points) {
            const auto fam = lgdim::family_from_json(lgdim::parse_json_file(pts_family));
            const auto seq = load_sequence(pts_seq, static_cast<int>(fam.size()));
            const auto mode = pts_mode == "sampled" ? lgdim::PointCloud::Mode::sampled
                                                    : lgdim::PointCloud::Mode::exhaustive;
            if (pts_mode != "sampled" && pts_mode != "exhaustive")
                throw std::invalid_argument("mode must be exhaustive or sampled");
            const auto cloud = lgdim::generate_points(fam, seq, pts_depth, mode, pts_count, pts_seed);
            lgdim::write_csv(cloud, pts_out);
            json report = {{"command", "points"},
                           {"points", cloud.points.size()},
                           {"out", pts_out},
                           {"config",
                            {{"depth", pts_depth},
                             {"mode", pts_mode},
                             {"count", pts_count},
                             {"seed", pts_seed},
                             {"family", pts_family}}}};
            emit(report);
            return 0;
        }

        if (*boxcount) {
            const auto cloud = lgdim::read_csv(box_in);
            const auto res = lgdim::box_count_estimate(cloud, box_kmin, box_kmax);
            json scales = json::array();
            for (const auto& s : res.scales)
                scales.push_back({{"k", s.k}, {"count", s.count}, {"residual", s.residual}});
            json report = {{"command", "boxcount"},
                           {"estimate", res.estimate},
                           {"k_min", res.k_min},
                           {"k_max_used", res.k_max_used},
                           {"scales", scales},
                           {"config", {{"points", box_in}, {"kmin", box_kmin}, {"kmax", box_kmax}}}};
            emit(report);
            return 0;
        }

        if (*render) {
            const auto cloud = lgdim::read_csv(render_in);
            lgdim::render_pgm(cloud, render_res, render_out);
            json report = {{"command", "render"},
                           {"out", render_out},
                           {"config", {{"points", render_in}, {"resolution", render_res}}}};
            emit(report);
            return 0;
        }

        std::cerr << app.help() << "\n";
        return 64;
    } catch (const lgdim::ValidationError& e) {
        json errors = json::array();
        for (const auto& issue : e.issues())
            errors.push_back({{"where", issue.where},
                              {"condition", issue.condition},
                              {"message", issue.message}});
        emit({{"error", e.what()}, {"errors", errors}});
        return 2;
    } catch (const lgdim::CapExceededError& e) {
        emit({{"error", e.what()}, {"projected_size", e.projected_size()}});
        return 2;
    } catch (const std::invalid_argument& e) {
        emit({{"error", e.what()}});
        return 2;
    } catch (const std::domain_error& e) {
        emit({{"error", e.what()}});
        return 2;
    } catch (const std::out_of_range& e) {
        emit({{"error", e.what()}});
        return 2;
    } catch (const json::exception& e) {
        emit({{"error", e.what()}});
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
