#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cfdim/cantor.hpp"
#include "cfdim/dimension.hpp"
#include "cfdim/errors.hpp"
#include "cfdim/formulas.hpp"
#include "cfdim/pressure.hpp"
#include "cfdim/transfer_operator.hpp"

namespace {

using Json = nlohmann::ordered_json;
using namespace cfdim;

// ---------------------------------------------------------------------------
// output plumbing

enum class Format { plain, csv, json };

std::string fmt_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return std::string(buf);
}

std::string scalar_text(const Json& v) {
    switch (v.type()) {
        case Json::value_t::number_float:
            return fmt_g(v.get<double>());
        case Json::value_t::number_integer:
            return std::to_string(v.get<long long>());
        case Json::value_t::number_unsigned:
            return std::to_string(v.get<unsigned long long>());
        case Json::value_t::boolean:
            return v.get<bool>() ? "true" : "false";
        case Json::value_t::string:
            return v.get<std::string>();
        default:
            return v.dump();
    }
}

bool all_scalars(const Json& arr) {
    for (const auto& e : arr)
        if (e.is_structured()) return false;
    return true;
}

/// Key paths are dotted; arrays of scalars join with commas, arrays of
/// objects flatten element by element.
void flatten(const Json& j, const std::string& prefix,
             std::vector<std::pair<std::string, std::string>>& out) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it)
            flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    } else if (j.is_array()) {
        if (all_scalars(j)) {
            std::string joined;
            for (const auto& e : j) {
                if (!joined.empty()) joined += ',';
                joined += scalar_text(e);
            }
            out.emplace_back(prefix, joined);
        } else {
            for (std::size_t i = 0; i < j.size(); ++i)
                flatten(j[i], prefix + "." + std::to_string(i), out);
        }
    } else {
        out.emplace_back(prefix, scalar_text(j));
    }
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char c : s) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

/// A result object with a "rows" key (an array of flat objects) renders as a
/// columnar table in csv and plain; everything else renders as field/value
/// pairs with dotted key paths.
void emit(const Json& j, Format f, std::ostream& os) {
    if (f == Format::json) {
        os << j.dump(2) << '\n';
        return;
    }
    const Json* rows = nullptr;
    if (j.is_object() && j.contains("rows") && j["rows"].is_array() && !j["rows"].empty() &&
        j["rows"].front().is_object())
        rows = &j["rows"];

    std::vector<std::pair<std::string, std::string>> fields;
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (rows && it.key() == "rows") continue;
            flatten(it.value(), it.key(), fields);
        }
    } else {
        flatten(j, "", fields);
    }

    if (f == Format::plain) {
        for (const auto& [k, v] : fields) os << k << ' ' << v << '\n';
        if (rows) {
            bool first = true;
            for (auto it = rows->front().begin(); it != rows->front().end(); ++it) {
                os << (first ? "" : " ") << it.key();
                first = false;
            }
            os << '\n';
            for (const auto& row : *rows) {
                first = true;
                for (auto it = row.begin(); it != row.end(); ++it) {
                    os << (first ? "" : " ") << scalar_text(it.value());
                    first = false;
                }
                os << '\n';
            }
        }
        return;
    }

    // csv: with a table present only the table is printed, so the headers
    // stay fixed per subcommand
    if (rows) {
        bool first = true;
        for (auto it = rows->front().begin(); it != rows->front().end(); ++it) {
            os << (first ? "" : ",") << csv_field(it.key());
            first = false;
        }
        os << '\n';
        for (const auto& row : *rows) {
            first = true;
            for (auto it = row.begin(); it != row.end(); ++it) {
                os << (first ? "" : ",") << csv_field(scalar_text(it.value()));
                first = false;
            }
            os << '\n';
        }
    } else {
        os << "field,value\n";
        for (const auto& [k, v] : fields) os << csv_field(k) << ',' << csv_field(v) << '\n';
    }
}

struct OutputOpts {
    std::string format = "plain";
    std::string path;
};

void add_output_flags(CLI::App* cmd, OutputOpts& oo) {
    cmd->add_option("--format", oo.format, "output format")
        ->capture_default_str()
        ->check(CLI::IsMember({"plain", "csv", "json"}));
    cmd->add_option("-o,--out", oo.path, "write to a file instead of standard output");
}

int write_out(const Json& j, const OutputOpts& oo) {
    Format f = oo.format == "csv" ? Format::csv : oo.format == "json" ? Format::json : Format::plain;
    if (oo.path.empty()) {
        emit(j, f, std::cout);
        return 0;
    }
    std::ofstream os(oo.path, std::ios::binary);
    if (!os) {
        std::cerr << "cannot open output file: " << oo.path << '\n';
        return 2;
    }
    emit(j, f, os);
    return 0;
}

void put_finite(Json& j, const char* key, double v) {
    if (std::isfinite(v)) j[key] = v;
}

std::string word_text(const DigitWord& w) {
    if (w.empty()) return "-";
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(w[i]);
    }
    return s;
}

// ---------------------------------------------------------------------------
// solver flag block shared by the dim subcommands

struct SolveFlags {
    std::string engine = "spectral";
    std::vector<int> ladder = {50, 100, 200};
    int grid = 32;
    int direct_depth = 8;
    std::string extrapolate = "aitken";
    double tol = 1e-8;
};

void add_solve_flags(CLI::App* cmd, SolveFlags& sf) {
    cmd->add_option("--engine", sf.engine, "pressure engine")
        ->capture_default_str()
        ->check(CLI::IsMember({"spectral", "direct"}));
    cmd->add_option("--ladder", sf.ladder, "alphabet truncation ladder")
        ->delimiter(',')
        ->capture_default_str();
    cmd->add_option("--grid", sf.grid, "spectral collocation size")
        ->capture_default_str()
        ->check(CLI::Range(4, 256));
    cmd->add_option("--depth", sf.direct_depth, "direct-engine word length")
        ->capture_default_str()
        ->check(CLI::Range(1, 32));
    cmd->add_option("--extrapolate", sf.extrapolate, "ladder combination rule")
        ->capture_default_str()
        ->check(CLI::IsMember({"last", "aitken", "richardson"}));
    cmd->add_option("--tol", sf.tol, "bisection width on s")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
}

SolveOptions make_solve_options(const SolveFlags& sf) {
    SolveOptions opt;
    opt.engine = sf.engine == "direct" ? EngineKind::direct : EngineKind::spectral;
    opt.alphabet_ladder = sf.ladder;
    opt.grid = sf.grid;
    opt.direct_depth = sf.direct_depth;
    opt.extrapolate = sf.extrapolate == "last"         ? Extrapolation::last_rung
                      : sf.extrapolate == "richardson" ? Extrapolation::richardson
                                                       : Extrapolation::aitken;
    opt.tol = sf.tol;
    return opt;
}

const char* to_cstr(RootStatus st) {
    switch (st) {
        case RootStatus::boundary_low: return "boundary_low";
        case RootStatus::boundary_high: return "boundary_high";
        default: return "interior";
    }
}

Json result_json(const DimensionResult& r) {
    Json j;
    j["value"] = r.value;
    j["bracket_lo"] = r.bracket_lo;
    j["bracket_hi"] = r.bracket_hi;
    j["status"] = to_cstr(r.status);
    j["residual"] = r.residual;
    j["extrapolated"] = r.extrapolated;
    j["tail_bound"] = r.tail_bound;
    Json rungs = Json::array();
    for (std::size_t i = 0; i < r.rungs.size() && i < r.rung_M.size(); ++i) {
        Json e;
        e["alphabet_max"] = r.rung_M[i];
        e["value"] = r.rungs[i];
        rungs.push_back(std::move(e));
    }
    j["rungs"] = std::move(rungs);
    return j;
}

int finish_dim(Json& j, RootStatus status, const OutputOpts& oo) {
    int rc = write_out(j, oo);
    if (rc) return rc;
    if (status != RootStatus::interior) {
        std::cerr << "root left the bisection bracket (status " << to_cstr(status) << ")\n";
        return 3;
    }
    return 0;
}

// ---------------------------------------------------------------------------
// cantor flag block

struct CantorFlags {
    int alphabet_max = 3;
    int block_len = 2;
    std::vector<double> A;
    std::vector<double> c;
    int m_expected = 0;
    double eps = 1.0;
    int blocks = 1;
    std::string mode = "strict";
    std::vector<long long> nk;
    double threshold_C = 16.0;
    bool enforce_threshold = false;
    int depth = 6;
    int max_exact_bits = 4096;
};

void add_cantor_flags(CLI::App* cmd, CantorFlags& cf) {
    cmd->add_option("--M", cf.alphabet_max, "block digits range over [1, M]")
        ->capture_default_str()
        ->check(CLI::Range(2, 100000));
    cmd->add_option("--N", cf.block_len, "block word length")
        ->capture_default_str()
        ->check(CLI::Range(1, 64));
    cmd->add_option("--A", cf.A, "growth bases A_0..A_{m-1}")->required()->delimiter(',');
    cmd->add_option("--c", cf.c, "growth constants, default all 1")->delimiter(',');
    cmd->add_option("--m", cf.m_expected, "growth block length, cross-checked against --A");
    cmd->add_option("--eps", cf.eps, "Holder exponent defect")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--blocks", cf.blocks, "number of growth blocks (strict mode)")
        ->capture_default_str()
        ->check(CLI::Range(1, 64));
    cmd->add_option("--mode", cf.mode, "growth block placement")
        ->capture_default_str()
        ->check(CLI::IsMember({"strict", "padded"}));
    cmd->add_option("--nk", cf.nk, "explicit growth positions (padded mode)")->delimiter(',');
    cmd->add_option("--threshold-C", cf.threshold_C, "block-length threshold constant")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--enforce-threshold", cf.enforce_threshold,
                  "fail when the block length misses the threshold");
    cmd->add_option("--depth", cf.depth, "tree depth to walk")
        ->capture_default_str()
        ->check(CLI::Range(1, 64));
    cmd->add_option("--max-exact-bits", cf.max_exact_bits, "continuant magnitude guard")
        ->capture_default_str()
        ->check(CLI::Range(64, 1 << 20));
}

CantorRequest make_request(const CantorFlags& cf) {
    if (cf.m_expected > 0 && cf.m_expected != static_cast<int>(cf.A.size()))
        throw CLI::ValidationError("--m", "disagrees with the number of --A entries");
    if (cf.mode == "padded" && cf.nk.empty())
        throw CLI::ValidationError("--nk", "padded mode needs explicit growth positions");
    CantorRequest req;
    req.alphabet_max = cf.alphabet_max;
    req.block_len = cf.block_len;
    req.profile.A = cf.A;
    req.profile.c = cf.c.empty() ? std::vector<double>(cf.A.size(), 1.0) : cf.c;
    req.eps = cf.eps;
    req.blocks = cf.blocks;
    req.mode = cf.mode == "padded" ? CantorMode::padded : CantorMode::strict;
    req.n_k = cf.nk;
    req.threshold_C = cf.threshold_C;
    req.enforce_threshold = cf.enforce_threshold;
    req.max_exact_bits = cf.max_exact_bits;
    return req;
}

Json schedule_json(const CantorConfig& cfg) {
    Json j;
    j["ell"] = cfg.schedule.ell;
    j["n_k"] = cfg.schedule.n_k;
    j["d"] = cfg.d;
    j["log_norm"] = cfg.log_norm;
    j["threshold_ok"] = cfg.schedule.threshold_ok;
    j["threshold_min_N"] = cfg.schedule.threshold_min_N;
    return j;
}

Json holder_json(const HolderReport& r, bool with_rows) {
    Json j;
    j["ok"] = r.ok;
    j["tau"] = r.tau;
    j["burn_in"] = r.burn_in;
    put_finite(j, "median_beyond_burn_in", r.median_beyond_burn_in);
    put_finite(j, "inf_beyond_burn_in", r.inf_beyond_burn_in);
    Json rows = Json::array();
    for (const auto& lv : r.levels) {
        Json e;
        e["level"] = lv.level;
        put_finite(e, "min", lv.min);
        put_finite(e, "median", lv.median);
        put_finite(e, "max", lv.max);
        rows.push_back(std::move(e));
    }
    j[with_rows ? "rows" : "levels"] = std::move(rows);
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"continued-fraction limsup sets: dimension solvers and tree verification", "cfdim"};
    app.require_subcommand(1);
    app.footer("CFDIM_NODE_BUDGET caps every tree enumeration (default 268435456 nodes).");
    int rc = 0;

    // ---- dim ---------------------------------------------------------------
    auto* dim = app.add_subcommand("dim", "Hausdorff dimension of a growth family");
    dim->require_subcommand(1);

    struct {
        double B = 4.0;
        SolveFlags sf;
        OutputOpts oo;
    } ww;
    auto* wangwu = dim->add_subcommand("wangwu", "level sets with q_n^2 ~ B^n");
    wangwu->add_option("--B", ww.B, "growth base, B >= 1")->required();
    add_solve_flags(wangwu, ww.sf);
    add_output_flags(wangwu, ww.oo);
    wangwu->callback([&] {
        DimensionResult r = dim_single(ww.B, make_solve_options(ww.sf));
        Json j;
        j["family"] = "wangwu";
        j["B"] = ww.B;
        j.update(result_json(r));
        rc = finish_dim(j, r.status, ww.oo);
    });

    struct {
        double B1 = 16.0, B2 = 3.0;
        SolveFlags sf;
        OutputOpts oo;
    } tp;
    auto* twoparam = dim->add_subcommand("twoparam", "two-sided growth window B2^n <= q_n^2/B1^n");
    twoparam->add_option("--B1", tp.B1, "upper growth base")->required();
    twoparam->add_option("--B2", tp.B2, "lower growth base")->required();
    add_solve_flags(twoparam, tp.sf);
    add_output_flags(twoparam, tp.oo);
    twoparam->callback([&] {
        DimensionResult r = dim_two_param(tp.B1, tp.B2, make_solve_options(tp.sf));
        Json j;
        j["family"] = "twoparam";
        j["B1"] = tp.B1;
        j["B2"] = tp.B2;
        j.update(result_json(r));
        rc = finish_dim(j, r.status, tp.oo);
    });

    struct {
        std::vector<double> A;
        std::vector<double> c;
        SolveFlags sf;
        OutputOpts oo;
    } ge;
    auto* general = dim->add_subcommand("general", "growth profile: component-wise two-parameter roots");
    general->add_option("--A", ge.A, "profile bases A_0..A_{m-1}")->required()->delimiter(',');
    general->add_option("--c", ge.c, "profile constants, default all 1")->delimiter(',');
    add_solve_flags(general, ge.sf);
    add_output_flags(general, ge.oo);
    general->callback([&] {
        GrowthProfile prof;
        prof.A = ge.A;
        prof.c = ge.c.empty() ? std::vector<double>(ge.A.size(), 1.0) : ge.c;
        prof.validate();
        ProfileDimensions pd = profile_dimensions(prof, make_solve_options(ge.sf));
        Json j;
        j["family"] = "general";
        j["A"] = prof.A;
        j["c"] = prof.c;
        j["value"] = pd.min_value;
        j["argmin"] = pd.argmin;
        Json comps = Json::array();
        RootStatus worst = RootStatus::interior;
        for (std::size_t i = 0; i < pd.d.size(); ++i) {
            Json e;
            e["component"] = static_cast<long long>(i);
            e["B1"] = prof.beta(static_cast<int>(i));
            e["B2"] = prof.beta(static_cast<int>(i) - 1);
            e["value"] = pd.d[i].value;
            e["status"] = to_cstr(pd.d[i].status);
            e["residual"] = pd.d[i].residual;
            comps.push_back(std::move(e));
            if (pd.d[i].status != RootStatus::interior) worst = pd.d[i].status;
        }
        j["components"] = std::move(comps);
        rc = finish_dim(j, worst, ge.oo);
    });

    struct {
        double B = 4.0;
        int m = 2;
        SolveFlags sf;
        OutputOpts oo;
    } pm;
    auto* product = dim->add_subcommand("product", "m-fold digit products at scale B^n");
    product->add_option("--B", pm.B, "growth base, B > 1")->required();
    product->add_option("--m", pm.m, "product length")->required()->check(CLI::Range(1, 64));
    add_solve_flags(product, pm.sf);
    add_output_flags(product, pm.oo);
    product->callback([&] {
        DimensionResult r = product_dimension(pm.B, pm.m, make_solve_options(pm.sf));
        Json j;
        j["family"] = "product";
        j["B"] = pm.B;
        j["m"] = pm.m;
        j.update(result_json(r));
        rc = finish_dim(j, r.status, pm.oo);
    });

    struct {
        double B = 4.0, t0 = 1.0, t1 = 1.0;
        SolveFlags sf;
        OutputOpts oo;
    } wt;
    auto* weighted = dim->add_subcommand("weighted", "weighted two-exponent digit pairs");
    weighted->add_option("--B", wt.B, "growth base, B > 1")->required();
    weighted->add_option("--t0", wt.t0, "first weight")->required()->check(CLI::PositiveNumber);
    weighted->add_option("--t1", wt.t1, "second weight")->required()->check(CLI::PositiveNumber);
    add_solve_flags(weighted, wt.sf);
    add_output_flags(weighted, wt.oo);
    weighted->callback([&] {
        DimensionResult r = weighted_dimension(wt.B, wt.t0, wt.t1, make_solve_options(wt.sf));
        Json j;
        j["family"] = "weighted";
        j["B"] = wt.B;
        j["t0"] = wt.t0;
        j["t1"] = wt.t1;
        j.update(result_json(r));
        rc = finish_dim(j, r.status, wt.oo);
    });

    struct {
        std::string B;
        double b = 0.0;
        SolveFlags sf;
        OutputOpts oo;
    } tw;
    auto* ttw = dim->add_subcommand("ttw", "triple digit products; B=inf with --b for the doubly exponential family");
    ttw->add_option("--B", tw.B, "growth base, B >= 1 or inf");
    ttw->add_option("--b", tw.b, "doubly exponential base, b > 1 (with --B inf)");
    add_solve_flags(ttw, tw.sf);
    add_output_flags(ttw, tw.oo);
    ttw->callback([&] {
        double B = std::numeric_limits<double>::infinity();
        if (!tw.B.empty()) {
            try {
                std::size_t pos = 0;
                B = std::stod(tw.B, &pos);
                if (pos != tw.B.size()) throw std::invalid_argument(tw.B);
            } catch (const std::exception&) {
                throw CLI::ValidationError("--B", "expects a number or inf");
            }
        }
        Json j;
        j["family"] = "ttw";
        if (std::isinf(B)) {
            if (tw.b <= 1.0)
                throw CLI::ValidationError("--b", "the doubly exponential family needs b > 1");
            j["b"] = tw.b;
            j["value"] = doubly_exponential_dim(tw.b);
            rc = write_out(j, tw.oo);
        } else {
            if (tw.b != 0.0)
                throw CLI::ValidationError("--b", "applies only with --B inf");
            DimensionResult r = triple_product_dimension(B, make_solve_options(tw.sf));
            j["B"] = B;
            j.update(result_json(r));
            rc = finish_dim(j, r.status, tw.oo);
        }
    });

    struct {
        double B1 = 4.0, B2 = 2.0;
        int m = 2;
        double boundary_rel_tol = 1e-6;
        SolveFlags sf;
        OutputOpts oo;
    } cl;
    auto* classify = dim->add_subcommand("classify", "regime of the (B1, B2, m) window, with witness profile");
    classify->add_option("--B1", cl.B1, "n-th digit scale")->required();
    classify->add_option("--B2", cl.B2, "block product scale")->required();
    classify->add_option("--m", cl.m, "block length")->required()->check(CLI::Range(2, 64));
    classify->add_option("--boundary-rel-tol", cl.boundary_rel_tol, "threshold proximity tolerance")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    add_solve_flags(classify, cl.sf);
    add_output_flags(classify, cl.oo);
    classify->callback([&] {
        ClassifyOptions opt;
        opt.solve = make_solve_options(cl.sf);
        opt.boundary_rel_tol = cl.boundary_rel_tol;
        FmClassification fc = classify_window(cl.B1, cl.B2, cl.m, opt);
        Json j;
        j["family"] = "classify";
        j["B1"] = cl.B1;
        j["B2"] = cl.B2;
        j["m"] = cl.m;
        j["regime"] = fc.regime == FmCase::empty ? "empty" : fc.regime == FmCase::g_regime ? "g" : "t";
        j["boundary"] = fc.boundary;
        j["t"] = fc.t;
        j["theta"] = fc.theta;
        j["log_threshold"] = fc.log_threshold;
        if (fc.dimension) j["dimension"] = *fc.dimension;
        if (fc.t_dimension) j["t_dimension"] = *fc.t_dimension;
        if (fc.g_dimension) j["g_dimension"] = *fc.g_dimension;
        if (fc.witness) {
            j["witness_A"] = fc.witness->A;
            j["witness_c"] = fc.witness->c;
        }
        Json checks = Json::array();
        for (const auto& chk : fc.witness_checks) {
            Json e;
            e["slope"] = chk.slope;
            e["intercept"] = chk.intercept;
            e["eventually"] = chk.eventually;
            e["satisfied_from"] = chk.satisfied_from;
            checks.push_back(std::move(e));
        }
        j["witness_checks"] = std::move(checks);
        rc = write_out(j, cl.oo);
    });

    // ---- pressure ----------------------------------------------------------
    struct {
        double s = 0.8;
        std::string sweep;
        double B = 1.0;
        std::string engine = "spectral";
        std::string M = "50";
        int depth = 10;
        int depth_min = 2;
        int grid = 32;
        double anchor = 0.0;
        std::string extrapolate = "aitken";
        OutputOpts oo;
    } pr;
    auto* pressure = app.add_subcommand("pressure", "pressure of the Gauss potential -s log|T'| - s ln B");
    auto* opt_s = pressure->add_option("--s", pr.s, "exponent")->capture_default_str();
    pressure->add_option("--sweep", pr.sweep, "sweep spec s:lo:hi:step")->excludes(opt_s);
    pressure->add_option("--B", pr.B, "offset base, B >= 1")->capture_default_str();
    pressure->add_option("--engine", pr.engine, "summation engine")
        ->capture_default_str()
        ->check(CLI::IsMember({"spectral", "direct"}));
    pressure->add_option("--M", pr.M, "alphabet truncation, integer or inf")->capture_default_str();
    pressure->add_option("--n", pr.depth, "direct-engine ladder depth")
        ->capture_default_str()
        ->check(CLI::Range(2, 32));
    pressure->add_option("--depth-min", pr.depth_min, "first ladder rung used")
        ->capture_default_str()
        ->check(CLI::Range(1, 32));
    pressure->add_option("--grid", pr.grid, "spectral collocation size")
        ->capture_default_str()
        ->check(CLI::Range(4, 256));
    pressure->add_option("--anchor", pr.anchor, "direct-sum anchor y in [0,1)")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 1.0));
    pressure->add_option("--extrapolate", pr.extrapolate, "direct ladder combination rule")
        ->capture_default_str()
        ->check(CLI::IsMember({"last", "aitken", "richardson"}));
    add_output_flags(pressure, pr.oo);
    pressure->callback([&] {
        if (!(pr.B >= 1.0)) throw CLI::ValidationError("--B", "offset base must be >= 1");
        std::vector<double> svals;
        if (!pr.sweep.empty()) {
            std::vector<std::string> tok;
            std::string cur;
            for (char ch : pr.sweep + ":") {
                if (ch == ':') {
                    tok.push_back(cur);
                    cur.clear();
                } else {
                    cur += ch;
                }
            }
            if (tok.size() != 4 || tok[0] != "s")
                throw CLI::ValidationError("--sweep", "expects s:lo:hi:step");
            double lo, hi, step;
            try {
                lo = std::stod(tok[1]);
                hi = std::stod(tok[2]);
                step = std::stod(tok[3]);
            } catch (const std::exception&) {
                throw CLI::ValidationError("--sweep", "expects numeric bounds");
            }
            if (!(step > 0.0) || !(lo <= hi))
                throw CLI::ValidationError("--sweep", "needs lo <= hi and step > 0");
            if ((hi - lo) / step > 100000)
                throw CLI::ValidationError("--sweep", "too many points");
            for (double v = lo; v <= hi + 1e-12; v += step) svals.push_back(v);
        } else {
            svals.push_back(pr.s);
        }

        std::optional<int> M;
        if (pr.M != "inf") {
            try {
                std::size_t pos = 0;
                int v = std::stoi(pr.M, &pos);
                if (pos != pr.M.size() || v < 1) throw std::invalid_argument(pr.M);
                M = v;
            } catch (const std::exception&) {
                throw CLI::ValidationError("--M", "expects a positive integer or inf");
            }
        }
        Offset h = offset_single(pr.B);

        Json j;
        j["engine"] = pr.engine;
        if (M)
            j["alphabet_max"] = *M;
        else
            j["alphabet_max"] = "inf";
        j["B"] = pr.B;

        std::vector<TransferOperator> inf_ops;
        if (!M) {
            if (pr.engine == "direct") throw Error("direct enumeration needs a finite alphabet");
            for (double s : svals)
                if (s <= 0.5)
                    throw DivergenceError("pressure diverges at s <= 1/2 over the unbounded alphabet");
            for (int rM : {64, 128, 256}) inf_ops.emplace_back(rM, pr.grid, true);
        }

        auto estimate = [&](double s) -> PressureEstimate {
            if (!M) {
                PressureEstimate est;
                est.method = PressureMethod::spectral;
                est.grid = pr.grid;
                for (const auto& op : inf_ops)
                    est.ladder.push_back(std::log(op.leading_eigenvalue(s)) + h(s));
                est.value = aitken_last(est.ladder);
                // leftover after tail completion, first order
                est.tail_bound = std::pow(256.0, -2.0 * s) / (2.0 * s);
                est.extrapolated = true;
                return est;
            }
            Potential pot{s, h};
            if (pr.engine == "direct") {
                PressureDirectOptions dopt;
                dopt.depth_min = pr.depth_min;
                dopt.extrapolate = pr.extrapolate == "last"         ? Extrapolation::last_rung
                                   : pr.extrapolate == "richardson" ? Extrapolation::richardson
                                                                    : Extrapolation::aitken;
                dopt.sums.anchor = pr.anchor;
                return pressure_direct(pot, *M, pr.depth, dopt);
            }
            return pressure_spectral(pot, *M, pr.grid);
        };

        if (svals.size() == 1) {
            PressureEstimate est = estimate(svals[0]);
            j["s"] = svals[0];
            j["value"] = est.value;
            if (est.method == PressureMethod::direct_sum)
                j["depth"] = est.depth;
            else
                j["grid"] = pr.grid;
            put_finite(j, "tail_bound", est.tail_bound);
            j["extrapolated"] = est.extrapolated;
            j["ladder"] = est.ladder;
            if (!est.diffs.empty()) j["diffs"] = est.diffs;
        } else {
            Json rows = Json::array();
            for (double s : svals) {
                PressureEstimate est = estimate(s);
                Json e;
                e["s"] = s;
                e["value"] = est.value;
                put_finite(e, "tail_bound", est.tail_bound);
                rows.push_back(std::move(e));
            }
            j["rows"] = std::move(rows);
        }
        rc = write_out(j, pr.oo);
    });

    // ---- cantor ------------------------------------------------------------
    auto* cantor = app.add_subcommand("cantor", "limsup-set tree construction and verification");
    cantor->require_subcommand(1);

    struct {
        CantorFlags cf;
        int burn_in = -1;
        double slack = 0.05;
        bool selftest = false;
        std::string dump_path;
        OutputOpts oo;
    } cv;
    auto* verify = cantor->add_subcommand("verify", "exhaustive desk-scale verification of the construction");
    add_cantor_flags(verify, cv.cf);
    verify->add_option("--burn-in", cv.burn_in, "levels excluded from the pooled Holder statistic");
    verify->add_option("--slack", cv.slack, "tolerance under tau for the pooled median")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    verify->add_flag("--selftest", cv.selftest, "corrupt one node measure and expect detection");
    verify->add_option("--dump", cv.dump_path, "write the node dump to this file");
    add_output_flags(verify, cv.oo);
    verify->callback([&] {
        CantorConfig cfg = build_schedule(make_request(cv.cf), cv.cf.depth);
        CantorTree tree(std::move(cfg));
        const CantorConfig& c = tree.config();
        Json j;
        j["mode"] = cv.cf.mode;
        j["alphabet_max"] = cv.cf.alphabet_max;
        j["block_len"] = cv.cf.block_len;
        j["eps"] = cv.cf.eps;
        j["depth"] = cv.cf.depth;
        j["schedule"] = schedule_json(c);

        std::optional<Corruption> corrupt;
        if (cv.selftest) corrupt = Corruption{{c.at(1).digit_lo}, 0, 1e-3};

        ConsistencyReport cons = tree.verify_consistency(cv.cf.depth, corrupt);
        GapReport gap = tree.verify_gap(cv.cf.depth);
        LengthReport len = tree.verify_lengths(cv.cf.depth);
        HolderReport hol = tree.holder_report(cv.cf.depth, cv.burn_in, cv.slack);

        Json jc;
        jc["ok"] = cons.ok;
        jc["internal_nodes"] = cons.internal_nodes;
        jc["max_rel_violation"] = cons.max_rel_violation;
        jc["max_mass_error"] = cons.max_mass_error;
        if (!cons.worst.empty()) jc["worst"] = word_text(cons.worst);
        j["consistency"] = std::move(jc);

        Json jg;
        jg["ok"] = gap.ok;
        double global = std::numeric_limits<double>::infinity();
        Json glv = Json::array();
        for (const auto& lv : gap.levels) {
            Json e;
            e["level"] = lv.level;
            e["cylinders"] = lv.cylinders;
            put_finite(e, "min_ratio", lv.min_ratio);
            glv.push_back(std::move(e));
            global = std::min(global, lv.min_ratio);
        }
        put_finite(jg, "min_ratio", global);
        jg["levels"] = std::move(glv);
        j["gap"] = std::move(jg);

        Json jl;
        jl["ok"] = len.ok;
        jl["nodes"] = len.nodes;
        jl["constant_violations"] = len.constant_violations;
        jl["exponent_violations"] = len.exponent_violations;
        jl["worst_log_margin"] = len.worst_log_margin;
        if (!len.worst.empty()) jl["worst"] = word_text(len.worst);
        j["lengths"] = std::move(jl);

        j["holder"] = holder_json(hol, false);

        bool pass = cons.ok && gap.ok && len.ok && hol.ok;
        j["verdict"] = pass ? "pass" : "fail";

        if (!cv.dump_path.empty()) {
            std::ofstream f(cv.dump_path, std::ios::binary);
            if (!f) {
                std::cerr << "cannot open dump file: " << cv.dump_path << '\n';
                rc = 2;
                return;
            }
            tree.dump(f, cv.cf.depth);
            j["dump"] = cv.dump_path;
        }

        rc = write_out(j, cv.oo);
        if (rc == 0 && !pass) {
            std::cerr << "verification failed:";
            if (!cons.ok) std::cerr << " mass-consistency";
            if (!gap.ok) std::cerr << " gap-separation";
            if (!len.ok) std::cerr << " length-brackets";
            if (!hol.ok) std::cerr << " holder-exponent";
            std::cerr << '\n';
            rc = 4;
        }
    });

    struct {
        CantorFlags cf;
        int burn_in = -1;
        double slack = 0.05;
        OutputOpts oo;
    } ch;
    auto* holder = cantor->add_subcommand("holder", "per-level local Holder exponents of the mass distribution");
    add_cantor_flags(holder, ch.cf);
    holder->add_option("--burn-in", ch.burn_in, "levels excluded from the pooled statistic");
    holder->add_option("--slack", ch.slack, "tolerance under tau for the pooled median")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    add_output_flags(holder, ch.oo);
    holder->callback([&] {
        CantorConfig cfg = build_schedule(make_request(ch.cf), ch.cf.depth);
        CantorTree tree(std::move(cfg));
        HolderReport hol = tree.holder_report(ch.cf.depth, ch.burn_in, ch.slack);
        Json j;
        j["mode"] = ch.cf.mode;
        j["depth"] = ch.cf.depth;
        j.update(holder_json(hol, true));
        rc = write_out(j, ch.oo);
        if (rc == 0 && !hol.ok) {
            std::cerr << "verification failed: holder-exponent\n";
            rc = 4;
        }
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const BracketError& e) {
        std::cerr << e.what() << '\n';
        return 3;
    } catch (const NumericError& e) {
        std::cerr << e.what() << '\n';
        return 3;
    } catch (const OverflowError& e) {
        std::cerr << e.what() << '\n';
        return 3;
    } catch (const Error& e) {
        std::cerr << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << e.what() << '\n';
        return 3;
    }
    return rc;
}
