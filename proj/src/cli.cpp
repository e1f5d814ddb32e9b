#include "sqwell/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include <json.hpp>

#include "sqwell/error.hpp"
#include "sqwell/verify.hpp"

namespace sqwell::cli {

namespace {

using nlohmann::json;

struct Options {
    double y = 1.0;
    double z = 1.0;
    int levels = 5;
    double tol = kDefaultRootTol;
    std::optional<int> grid;
    std::string weights;
    bool unsafe = false;
    int pair = 0;
    double critical_tol = kDefaultCriticalTol;
    double c_min = 0.0;
    double c_max = 6.0;
    int c_steps = 13;
    std::string format = "json";
    std::string verify_format = "table";
    std::string output;
};

std::string num(double v) { return fmt::format("{:.17g}", v); }

const char* sublabel_name(Sublabel s) {
    switch (s) {
        case Sublabel::Minus: return "MINUS";
        case Sublabel::Plus: return "PLUS";
        case Sublabel::None: break;
    }
    return "NONE";
}

json to_json(const LevelSolution& l) {
    return {{"n", l.n},
            {"s", l.s},
            {"t", l.t},
            {"eps", l.eps},
            {"E", l.E},
            {"residual", l.residual},
            {"branch", std::string(to_string(l.branch))},
            {"sublabel", sublabel_name(l.sublabel)},
            {"non_diagonalizable", l.non_diagonalizable}};
}

json complex_matrix(const Eigen::MatrixXcd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

void validate_common(const Options& o) {
    if (o.levels < 1 || o.levels > 10000) throw Error(ErrorCode::Validation, "--levels must be in 1..10000");
    if (!(o.tol > 0) || !std::isfinite(o.tol)) throw Error(ErrorCode::InvalidTolerance, "--tol must be > 0");
    if (o.grid && (*o.grid < 8 || *o.grid % 2 != 0 || *o.grid > 2048)) {
        throw Error(ErrorCode::Validation, "--grid must be even and in 8..2048");
    }
}

class Command {
public:
    Command(const Options& o, std::ostream& data, std::ostream& err) : o_(o), data_(data), err_(err) {}

    int spectrum_cmd() {
        validate_common(o_);
        const CouplingPair c(o_.y, o_.z);
        const Spectrum sp = spectrum(c, o_.levels - 1, o_.tol);
        if (o_.format == "csv") {
            data_ << "n,s,t,eps,E,residual,branch,sublabel,non_diagonalizable\n";
            for (const LevelSolution& l : sp.levels) {
                data_ << l.n << ',' << num(l.s) << ',' << num(l.t) << ',' << num(l.eps) << ',' << num(l.E) << ','
                      << num(l.residual) << ',' << to_string(l.branch) << ',' << sublabel_name(l.sublabel) << ','
                      << (l.non_diagonalizable ? "true" : "false") << '\n';
            }
        } else {
            json arr = json::array();
            for (const LevelSolution& l : sp.levels) arr.push_back(to_json(l));
            data_ << arr.dump(2) << '\n';
        }
        if (sp.truncated) {
            err_ << fmt::format("ROOT_LOST: level {} has no real root at sqrt(YZ) = {}; output stops before it\n",
                                *sp.lost_level, num(c.strength()));
            return kRootLost;
        }
        return kOk;
    }

    int critical_cmd() {
        if (o_.pair < 0 || o_.pair > 1000) throw Error(ErrorCode::Validation, "--pair must be in 0..1000");
        if (!(o_.critical_tol > 0) || !std::isfinite(o_.critical_tol)) {
            throw Error(ErrorCode::InvalidTolerance, "--tol must be > 0");
        }
        const CriticalResult r = critical_coupling(o_.pair, o_.critical_tol);
        if (o_.format == "csv") {
            data_ << "pair_index,c_crit,bracket_width,evaluations\n"
                  << r.pair_index << ',' << num(r.c_crit) << ',' << num(r.bracket_width) << ',' << r.evaluations << '\n';
        } else {
            const json j = {{"pair_index", r.pair_index},
                            {"c_crit", r.c_crit},
                            {"bracket_width", r.bracket_width},
                            {"evaluations", r.evaluations}};
            data_ << j.dump(2) << '\n';
        }
        return kOk;
    }

    int metric_cmd() {
        validate_common(o_);
        const CouplingPair c(o_.y, o_.z);
        const MetricWeights w = weights();
        const ModeBasis basis = build_mode_basis(c, o_.levels, o_.tol);
        const OperatorRep theta = build_theta_metric(basis, w, BasisSpec::mode(), o_.unsafe);
        const Signature sig = metric_signature(theta);
        const double defect_h = quasi_hermiticity_defect(mode_operator(basis, OperatorKind::Hamiltonian), theta);
        const double defect_omega = quasi_hermiticity_defect(mode_operator(basis, OperatorKind::Spin), theta);
        if (sig.negative > 0 || sig.zero > 0) {
            err_ << fmt::format("{}: metric has {} negative and {} zero eigenvalues; not an inner product\n",
                                o_.unsafe ? "UNSAFE" : "warning", sig.negative, sig.zero);
        }
        if (o_.format == "csv") {
            data_ << "row,col,re,im\n";
            for (Eigen::Index i = 0; i < theta.dim(); ++i) {
                for (Eigen::Index j = 0; j < theta.dim(); ++j) {
                    data_ << i << ',' << j << ',' << num(theta.entries(i, j).real()) << ','
                          << num(theta.entries(i, j).imag()) << '\n';
                }
            }
        } else {
            json states = json::array();
            for (const ChannelState& st : basis.states) {
                states.push_back({{"n", st.level->n}, {"sigma", st.sigma}, {"q", st.q}, {"E", st.energy()}});
            }
            json weights_json = json::array();
            for (int n = 0; n < o_.levels; ++n) weights_json.push_back({{"n", n}, {"S_plus", w.plus(n)}, {"S_minus", w.minus(n)}});
            const json j = {{"Y", c.y()},
                            {"Z", c.z()},
                            {"levels", o_.levels},
                            {"basis", "MODE"},
                            {"states", states},
                            {"weights", weights_json},
                            {"theta", complex_matrix(theta.entries)},
                            {"eigenvalues", sig.eigenvalues},
                            {"signature", {{"positive", sig.positive}, {"negative", sig.negative}, {"zero", sig.zero}}},
                            {"defect_H", defect_h},
                            {"defect_Omega", defect_omega},
                            {"unsafe", o_.unsafe}};
            data_ << j.dump(2) << '\n';
        }
        return kOk;
    }

    int verify_cmd() {
        validate_common(o_);
        SuiteConfig cfg;
        cfg.coupling = CouplingPair(o_.y, o_.z);
        cfg.levels = o_.levels;
        cfg.grid = o_.grid.value_or(512);
        cfg.tol = o_.tol;
        cfg.allow_indefinite = o_.unsafe;
        if (!o_.weights.empty()) cfg.weights = weights();
        const std::vector<CheckResult> results = invariant_suite(cfg);
        if (o_.verify_format == "json") {
            json arr = json::array();
            for (const CheckResult& r : results) {
                arr.push_back({{"name", r.name},
                               {"value", r.value},
                               {"threshold", r.threshold},
                               {"passed", r.passed},
                               {"skipped", r.skipped},
                               {"note", r.note}});
            }
            data_ << arr.dump(2) << '\n';
        } else if (o_.verify_format == "csv") {
            data_ << "name,value,threshold,status\n";
            for (const CheckResult& r : results) {
                data_ << r.name << ',' << num(r.value) << ',' << num(r.threshold) << ',' << status(r) << '\n';
            }
        } else {
            data_ << fmt::format("{:<26} {:>12} {:>12}  {}\n", "check", "value", "threshold", "status");
            for (const CheckResult& r : results) {
                data_ << fmt::format("{:<26} {:>12.3e} {:>12.3e}  {}{}\n", r.name, r.value, r.threshold, status(r),
                                     r.note.empty() ? "" : "  (" + r.note + ")");
            }
        }
        if (!all_passed(results)) {
            err_ << "verify: one or more checks failed\n";
            return kNumerical;
        }
        return kOk;
    }

    int scan_cmd() {
        validate_common(o_);
        if (o_.c_steps < 1 || o_.c_steps > 100000) throw Error(ErrorCode::Validation, "--c-steps must be in 1..100000");
        if (!std::isfinite(o_.c_min) || !std::isfinite(o_.c_max) || o_.c_min < 0 || o_.c_max < o_.c_min) {
            throw Error(ErrorCode::Validation, "need 0 <= --c-min <= --c-max");
        }
        std::vector<double> cs;
        for (int i = 0; i < o_.c_steps; ++i) {
            cs.push_back(o_.c_steps == 1 ? o_.c_min : o_.c_min + (o_.c_max - o_.c_min) * i / (o_.c_steps - 1));
        }
        std::optional<GridSpec> g;
        if (o_.grid) g.emplace(*o_.grid);

        json rows = json::array();
        if (o_.format == "csv") data_ << "c,n,real,s,E" << (g ? ",grid_max_imag" : "") << '\n';
        for (double cval : cs) {
            const CouplingPair c(cval, cval);
            const Spectrum sp = spectrum(c, o_.levels - 1, o_.tol);
            std::optional<double> grid_imag;
            if (g) grid_imag = criticality_scan(std::span<const double>(&cval, 1), *g, 2 * o_.levels).front().max_imag;
            for (int n = 0; n < o_.levels; ++n) {
                const bool real = n < static_cast<int>(sp.levels.size());
                if (o_.format == "csv") {
                    data_ << num(cval) << ',' << n << ',' << (real ? "true" : "false") << ','
                          << (real ? num(sp.levels[n].s) : "") << ',' << (real ? num(sp.levels[n].E) : "");
                    if (g) data_ << ',' << num(*grid_imag);
                    data_ << '\n';
                } else {
                    json row = {{"c", cval}, {"n", n}, {"real", real}};
                    row["s"] = real ? json(sp.levels[n].s) : json(nullptr);
                    row["E"] = real ? json(sp.levels[n].E) : json(nullptr);
                    if (g) row["grid_max_imag"] = *grid_imag;
                    rows.push_back(std::move(row));
                }
            }
        }
        if (o_.format != "csv") data_ << rows.dump(2) << '\n';
        return kOk;
    }

    int oracle_cmd() {
        validate_common(o_);
        const CouplingPair c(o_.y, o_.z);
        const GridSpec fine(o_.grid.value_or(512));
        const Spectrum sp = spectrum(c, o_.levels - 1, o_.tol);
        if (sp.truncated) {
            throw Error(ErrorCode::RootLost, "level " + std::to_string(*sp.lost_level) + " is past its critical coupling");
        }
        const std::vector<cplx> ev = eigenvalues(build_hamiltonian(c, fine));
        std::vector<cplx> coarse_ev;
        if (fine.intervals() / 2 >= 8 && (fine.intervals() / 2) % 2 == 0) {
            coarse_ev = eigenvalues(build_hamiltonian(c, GridSpec(fine.intervals() / 2)));
        }
        int targets = 0;
        for (std::size_t i = 0; i < sp.levels.size(); ++i) {
            if (i == 0 || sp.levels[i].n != sp.levels[i - 1].n || sp.levels[i].E != sp.levels[i - 1].E) ++targets;
        }
        const SpectrumComparison cmp = compare_spectrum(sp.levels, ev, std::min(targets, o_.levels), coarse_ev);
        const bool paired = real_or_conjugate_paired(ev, 1e-8);
        if (o_.format == "csv") {
            data_ << "n,analytic,numeric,abs_error,rel_error,splitting,max_imag,multiplicity,expected_multiplicity,order\n";
            for (const LevelComparison& l : cmp.levels) {
                data_ << l.n << ',' << num(l.analytic) << ',' << num(l.numeric) << ',' << num(l.abs_error) << ','
                      << num(l.rel_error) << ',' << num(l.splitting) << ',' << num(l.max_imag) << ',' << l.multiplicity
                      << ',' << l.expected_multiplicity << ',' << (l.order ? num(*l.order) : "") << '\n';
            }
        } else {
            json levels = json::array();
            for (const LevelComparison& l : cmp.levels) {
                levels.push_back({{"n", l.n},
                                  {"analytic", l.analytic},
                                  {"numeric", l.numeric},
                                  {"abs_error", l.abs_error},
                                  {"rel_error", l.rel_error},
                                  {"splitting", l.splitting},
                                  {"max_imag", l.max_imag},
                                  {"multiplicity", l.multiplicity},
                                  {"expected_multiplicity", l.expected_multiplicity},
                                  {"order", l.order ? json(*l.order) : json(nullptr)}});
            }
            const json j = {{"Y", c.y()},
                            {"Z", c.z()},
                            {"grid", fine.intervals()},
                            {"levels", levels},
                            {"max_rel_error", cmp.max_rel_error},
                            {"richardson_order", cmp.richardson_order ? json(*cmp.richardson_order) : json(nullptr)},
                            {"multiplicity_mismatch", cmp.multiplicity_mismatch},
                            {"real_or_conjugate_paired", paired}};
            data_ << j.dump(2) << '\n';
        }
        if (cmp.multiplicity_mismatch) err_ << "oracle: cluster multiplicities differ from the analytic degeneracy\n";
        return kOk;
    }

private:
    static const char* status(const CheckResult& r) { return r.skipped ? "SKIP" : r.passed ? "PASS" : "FAIL"; }

    MetricWeights weights() const {
        MetricWeights w = o_.weights.empty() ? MetricWeights::uniform(o_.levels) : read_weight_file(o_.weights, o_.levels);
        w.validate(o_.unsafe);
        return w;
    }

    const Options& o_;
    std::ostream& data_;
    std::ostream& err_;
};

int exit_code(ErrorCode code) {
    switch (code) {
        case ErrorCode::Validation:
        case ErrorCode::Domain:
        case ErrorCode::InvalidTolerance:
        case ErrorCode::Unsupported:
            return kValidation;
        case ErrorCode::RootLost:
            return kRootLost;
        default:
            return kNumerical;
    }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Two-channel pseudo-Hermitian square well: spectra, metrics and a finite-difference oracle.", "sqwell"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "0.1.0");

    const auto add_coupling = [&](CLI::App* sub) {
        sub->add_option("--Y", o.y, "lower-left coupling strength")->capture_default_str();
        sub->add_option("--Z", o.z, "upper-right coupling strength")->capture_default_str();
        sub->add_option("--levels", o.levels, "number of levels n = 0..levels-1")->capture_default_str();
        sub->add_option("--tol", o.tol, "root residual tolerance")->capture_default_str();
    };
    const auto add_output = [&](CLI::App* sub, bool table) {
        std::vector<std::string> formats{"json", "csv"};
        if (table) formats.insert(formats.begin(), "table");
        sub->add_option("--format", table ? o.verify_format : o.format, "output format")
            ->check(CLI::IsMember(formats))
            ->capture_default_str();
        sub->add_option("--output,-o", o.output, "write data here instead of stdout");
    };

    CLI::App* spectrum_app = app.add_subcommand("spectrum", "bound-state levels from the secular equation");
    add_coupling(spectrum_app);
    add_output(spectrum_app, false);

    CLI::App* critical_app = app.add_subcommand("critical", "critical coupling sqrt(YZ) where levels 2k, 2k+1 merge");
    critical_app->add_option("--pair", o.pair, "pair index k")->capture_default_str();
    critical_app->add_option("--tol", o.critical_tol, "bracket width on sqrt(YZ)")->capture_default_str();
    add_output(critical_app, false);

    CLI::App* metric_app = app.add_subcommand("metric", "metric Theta in the mode basis with its eigenvalues");
    add_coupling(metric_app);
    metric_app->add_option("--weights", o.weights, "weight file: lines `n S_plus S_minus` (default all 1)");
    metric_app->add_flag("--unsafe", o.unsafe, "allow negative weights (indefinite pseudo-metric)");
    add_output(metric_app, false);

    CLI::App* verify_app = app.add_subcommand("verify", "run the invariant suite; exit 4 if a check fails");
    add_coupling(verify_app);
    verify_app->add_option("--grid", o.grid, "finite-difference intervals M (default 512)");
    verify_app->add_option("--weights", o.weights, "weight file for the metric checks");
    verify_app->add_flag("--unsafe", o.unsafe, "allow negative weights");

    CLI::App* scan_app = app.add_subcommand("scan", "spectra over Y = Z = c with reality flags");
    scan_app->add_option("--c-min", o.c_min, "first c")->capture_default_str();
    scan_app->add_option("--c-max", o.c_max, "last c")->capture_default_str();
    scan_app->add_option("--c-steps", o.c_steps, "number of c values")->capture_default_str();
    scan_app->add_option("--levels", o.levels, "levels per c")->capture_default_str();
    scan_app->add_option("--tol", o.tol, "root residual tolerance")->capture_default_str();
    scan_app->add_option("--grid", o.grid, "also report the grid's max |Im E| at this M");
    add_output(scan_app, false);

    CLI::App* oracle_app = app.add_subcommand("oracle", "compare analytic levels with the finite-difference spectrum");
    add_coupling(oracle_app);
    oracle_app->add_option("--grid", o.grid, "finite-difference intervals M (default 512); M/2 gives the order");
    add_output(oracle_app, false);

    add_output(verify_app, true);

    std::vector<const char*> argv;
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kOk : kValidation;
    }

    std::ostringstream buffer;
    int code = kOk;
    try {
        Command cmd(o, buffer, err);
        if (spectrum_app->parsed()) code = cmd.spectrum_cmd();
        if (critical_app->parsed()) code = cmd.critical_cmd();
        if (metric_app->parsed()) code = cmd.metric_cmd();
        if (verify_app->parsed()) code = cmd.verify_cmd();
        if (scan_app->parsed()) code = cmd.scan_cmd();
        if (oracle_app->parsed()) code = cmd.oracle_cmd();
    } catch (const Error& e) {
        err << e.what() << '\n';
        code = exit_code(e.code());
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        code = kNumerical;
    }

    if (!o.output.empty()) {
        std::ofstream file(o.output);
        if (!file) {
            err << "cannot write " << o.output << '\n';
            return kValidation;
        }
        file << buffer.str();
    } else {
        out << buffer.str();
    }
    return code;
}

}  // namespace sqwell::cli
