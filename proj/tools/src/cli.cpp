#include "dyngreen/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "dyngreen/basis.hpp"
#include "dyngreen/bounds.hpp"
#include "dyngreen/global.hpp"
#include "dyngreen/mapfile.hpp"
#include "dyngreen/tfd.hpp"

namespace dyngreen::cli {

using nlohmann::json;

std::string format_real(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", x);
    return buf;
}

namespace {

json real(double x) {
    if (!std::isfinite(x)) return format_real(x);
    return std::stod(format_real(x));
}

json rat(const Rat& x) { return to_string(x); }

struct Options {
    std::string map_path;
    std::string place = "inf";
    double tol = kDefaultTol;
    std::uint64_t seed = 0;
    std::string format;
    unsigned workers = 1;
    unsigned precision = 53;
    std::vector<std::string> point;
    std::string points;
    long roots_of_unity = 0;
    long random = 0;
    std::string n_list = "2,4,8";
    int t = 2;
    int k = 1;
    long long N = 0;
    double B = std::log(10.0);
    double theta = 0.3;
    std::string a = "-1";
    std::string b = "0";
    std::string poly;
    long iterations = 20000;
    unsigned restarts = 4;
};

// A report: metadata, an optional table and a summary object.
struct Report {
    std::string command;
    std::string label;
    std::string place;
    double tol = 0.0;
    std::uint64_t seed = 0;
    std::vector<std::string> columns;
    std::vector<std::vector<json>> rows;
    json summary = json::object();

    void write(std::ostream& out, bool as_json) const {
        if (as_json) {
            json j = json::object();
            j["command"] = command;
            j["version"] = version_string();
            j["label"] = label;
            j["place"] = place;
            j["tol"] = real(tol);
            j["seed"] = seed;
            if (!columns.empty()) {
                json arr = json::array();
                for (const auto& row : rows) {
                    json o = json::object();
                    for (std::size_t i = 0; i < columns.size(); ++i) o[columns[i]] = row[i];
                    arr.push_back(std::move(o));
                }
                j["rows"] = std::move(arr);
            }
            for (auto it = summary.begin(); it != summary.end(); ++it) j[it.key()] = it.value();
            out << j.dump(2) << '\n';
            return;
        }
        out << "# dyngreen " << version_string() << ' ' << command << '\n';
        out << "# label=" << label << " place=" << place << " tol=" << format_real(tol) << " seed=" << seed << '\n';
        if (!columns.empty()) {
            for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "\t" : "") << columns[i];
            out << '\n';
            for (const auto& row : rows) {
                for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "\t" : "") << cell(row[i]);
                out << '\n';
            }
        }
        if (!summary.empty()) out << "# summary " << summary.dump() << '\n';
    }

    static std::string cell(const json& v) {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
        if (v.is_number_float()) return format_real(v.get<double>());
        if (v.is_null()) return "";
        return v.dump();
    }
};

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep))
        if (!cur.empty()) out.push_back(cur);
    return out;
}

std::vector<RationalPoint> explicit_points(const Options& o) {
    std::vector<RationalPoint> pts;
    for (const auto& p : o.point) pts.push_back(RationalPoint::parse(p));
    for (const auto& p : split(o.points, ';')) pts.push_back(RationalPoint::parse(p));
    return pts;
}

// Distinct points [a:b] with |a| <= 4n, 1 <= b <= 4n drawn from the seed.
std::vector<RationalPoint> random_points(long n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const long span = 4 * n + 4;
    std::uniform_int_distribution<long> da(-span, span), db(1, span);
    std::set<RationalPoint> seen;
    std::vector<RationalPoint> pts;
    while (static_cast<long>(pts.size()) < n) {
        const long a = da(rng), b = db(rng);
        RationalPoint p{Int(a), Int(b)};
        if (seen.insert(p).second) pts.push_back(p);
    }
    return pts;
}

std::vector<ComplexLift> roots_of_unity(long n) {
    std::vector<ComplexLift> pts;
    for (long j = 0; j < n; ++j) {
        const double th = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
        pts.push_back({std::complex<double>(std::cos(th), std::sin(th)), 1.0});
    }
    return pts;
}

struct PointSet {
    std::vector<ComplexLift> complex;
    std::vector<Lift> rational;
    bool is_complex() const { return !complex.empty(); }
};

PointSet collect_points(const Options& o, const Place& v) {
    PointSet ps;
    if (o.roots_of_unity > 0) {
        if (!v.is_archimedean()) throw DomainError("--roots-of-unity requires --place inf");
        ps.complex = roots_of_unity(o.roots_of_unity);
        return ps;
    }
    auto pts = explicit_points(o);
    if (o.random > 0) {
        auto more = random_points(o.random, o.seed);
        pts.insert(pts.end(), more.begin(), more.end());
    }
    for (const auto& p : pts) ps.rational.push_back(p.lift());
    if (ps.rational.empty()) throw DomainError("no points given (use --point, --points, --roots-of-unity or --random)");
    return ps;
}

class Runner {
public:
    Runner(const Options& o, std::ostream& out) : o_(o), out_(out) {}

    int dispatch(const std::string& cmd) {
        if (!(o_.tol > 0.0) || !std::isfinite(o_.tol)) throw DomainError("--tol must be positive");
        limits_ = Limits::from_env();
        place_ = Place::parse(o_.place);
        report_.command = cmd;
        report_.place = place_.to_string();
        report_.tol = o_.tol;
        report_.seed = o_.seed;
        const bool needs_map = cmd != "lattes" && cmd != "mahler-check";
        if (needs_map) {
            if (o_.map_path.empty()) throw DomainError("--map is required for " + cmd);
            spec_ = load_map_file(o_.map_path);
            report_.label = spec_->label.empty() ? "unlabeled" : spec_->label;
        }
        int code = kOk;
        if (cmd == "resultant") code = resultant_cmd();
        else if (cmd == "height") code = height_cmd();
        else if (cmd == "green") code = green_cmd();
        else if (cmd == "dsum") code = dsum_cmd();
        else if (cmd == "basis-check") code = basis_cmd();
        else if (cmd == "tfd") code = tfd_cmd();
        else if (cmd == "census") code = census_cmd();
        else if (cmd == "green-sum") code = green_sum_cmd();
        else if (cmd == "lattes") code = lattes_cmd();
        else if (cmd == "bound-report") code = bound_cmd();
        else if (cmd == "mahler-check") code = mahler_cmd();
        const bool as_json = o_.format.empty() ? cmd == "basis-check" : o_.format == "json";
        report_.write(out_, as_json);
        return code;
    }

private:
    const MapPair& map() const { return spec_->map; }

    int resultant_cmd() {
        report_.columns = {"resultant"};
        report_.rows.push_back({rat(map().resultant())});
        return kOk;
    }

    int height_cmd() {
        const LocalHeight h(map(), place_);
        report_.columns = {"point", "place", "value", "err", "iterations"};
        auto pts = explicit_points(o_);
        if (pts.empty()) throw DomainError("height: --point is required");
        for (const auto& p : pts) {
            const HeightValue v = h(p.lift(), o_.tol, o_.precision);
            report_.rows.push_back({p.to_string(), place_.to_string(), real(v.value), real(v.err), v.iterations});
        }
        return kOk;
    }

    int green_cmd() {
        auto pts = explicit_points(o_);
        if (pts.size() != 2) throw DomainError("green: exactly two points are required");
        const LocalHeight h(map(), place_);
        const GreenValue g = green(h, pts[0].lift(), pts[1].lift(), o_.tol);
        report_.columns = {"z", "w", "place", "value", "err"};
        report_.rows.push_back({pts[0].to_string(), pts[1].to_string(), place_.to_string(),
                                g.infinite ? json("inf") : real(g.value), real(g.err)});
        return kOk;
    }

    int dsum_cmd() {
        const LocalHeight h(map(), place_);
        const PointSet ps = collect_points(o_, place_);
        const DiscriminantSum s = ps.is_complex() ? dsum(h, ps.complex, o_.tol, o_.workers)
                                                  : dsum(h, ps.rational, o_.tol, o_.workers);
        report_.columns = {"N", "value", "err"};
        report_.rows.push_back({s.N, real(s.value), real(s.err)});
        return kOk;
    }

    int basis_cmd() {
        const SigmaIndex idx = make_sigma(o_.t, o_.k, map().degree());
        const PropositionCheck c = verify_proposition(map(), idx, limits_);
        report_.summary["N"] = idx.N;
        report_.summary["t"] = idx.t;
        report_.summary["k"] = idx.k;
        report_.summary["r"] = rat(c.r);
        report_.summary["det"] = rat(c.det);
        report_.summary["res_power"] = rat(c.res_power);
        report_.summary["verified"] = c.verified;
        return c.verified ? kOk : kPropertyViolation;
    }

    int tfd_cmd() {
        std::vector<int> ns;
        for (const auto& s : split(o_.n_list, ',')) ns.push_back(std::stoi(s));
        if (ns.empty()) throw DomainError("tfd: --n list is empty");
        TfdOptions opt;
        opt.iterations = o_.iterations;
        opt.restarts = o_.restarts;
        opt.workers = o_.workers;
        const TfdReport r = verify_tfd_inequality(map(), place_, ns, o_.seed, opt);
        report_.columns = {"n", "estimate", "bound", "slack", "iterations"};
        for (const auto& row : r.rows)
            report_.rows.push_back({row.n, real(row.estimate), real(row.bound), real(row.slack), row.iterations});
        report_.summary["C"] = real(r.C);
        report_.summary["all_ok"] = r.all_ok();
        return r.all_ok() ? kOk : kPropertyViolation;
    }

    int census_cmd() {
        const CensusResult c = small_point_census(map(), o_.B, o_.theta, o_.tol, o_.workers, limits_);
        report_.columns = {"a", "b", "hhat", "err", "preperiodic_flag"};
        for (const auto& e : c.witnesses)
            report_.rows.push_back({to_string(e.point.a()), to_string(e.point.b()), real(e.hhat), real(e.err),
                                    to_string(e.preperiodic)});
        report_.summary["B"] = real(c.B);
        report_.summary["theta"] = real(c.theta);
        report_.summary["box"] = c.box;
        report_.summary["enumerated"] = c.enumerated;
        report_.summary["count"] = c.count();
        report_.summary["min_positive_height"] = c.min_positive_height ? real(*c.min_positive_height) : json();
        report_.summary["min_positive_point"] = c.min_positive_point ? json(c.min_positive_point->to_string()) : json();
        return kOk;
    }

    int green_sum_cmd() {
        auto pts = explicit_points(o_);
        if (pts.size() != 2) throw DomainError("green-sum: exactly two points are required");
        const GreenSumCheck g = green_sum_identity_check(map(), pts[0], pts[1], o_.tol);
        report_.columns = {"place", "value", "err"};
        for (const auto& t : g.terms) report_.rows.push_back({t.place.to_string(), real(t.value), real(t.err)});
        report_.summary["green_sum"] = real(g.green_sum);
        report_.summary["height_sum"] = real(g.height_sum);
        report_.summary["residual"] = real(g.residual);
        report_.summary["err"] = real(g.err);
        return g.residual <= 2.0 * g.err + 1e-9 ? kOk : kPropertyViolation;
    }

    int lattes_cmd() {
        const Rat a = parse_rat(o_.a), b = parse_rat(o_.b);
        MapFile s{lattes_from_curve(a, b), "lattes(" + to_string(a) + "," + to_string(b) + ")"};
        report_.label = s.label;
        report_.columns = {"form", "coefficients"};
        for (int i = 0; i < 2; ++i) {
            const BinaryForm& f = i == 0 ? s.map.f1() : s.map.f2();
            std::string cs;
            for (const auto& c : f.coeffs()) cs += (cs.empty() ? "" : ",") + to_string(c);
            report_.rows.push_back({i == 0 ? "F1" : "F2", cs});
        }
        report_.summary["map"] = json::parse(to_json(s));
        report_.summary["resultant"] = rat(s.map.resultant());
        return kOk;
    }

    int bound_cmd() {
        const LocalHeight h(map(), place_);
        const PointSet ps = collect_points(o_, place_);
        const BoundReport r = ps.is_complex() ? bound_report(h, ps.complex, o_.tol, o_.workers)
                                              : bound_report(h, ps.rational, o_.tol, o_.workers);
        auto opt = [](const std::optional<double>& x) { return x ? real(*x) : json(); };
        report_.summary["N"] = r.N;
        report_.summary["r_F"] = real(r.r_F);
        report_.summary["R_up"] = real(r.R_up);
        report_.summary["alpha"] = r.alpha;
        report_.summary["epsilon_K"] = r.epsilon_K;
        report_.summary["rhs_technical"] = opt(r.rhs_technical);
        report_.summary["rhs_corollary"] = opt(r.rhs_corollary);
        report_.summary["C_effective"] = real(r.C_effective);
        report_.summary["rhs_effective"] = real(r.rhs_effective);
        report_.summary["observed_sum"] = real(r.observed_sum);
        report_.summary["observed_err"] = real(r.observed_err);
        report_.summary["observed_wedge_sum"] = opt(r.observed_wedge_sum);
        report_.summary["technical_ok"] = r.technical_ok();
        report_.summary["corollary_ok"] = r.corollary_ok();
        report_.summary["effective_ok"] = r.effective_ok();
        return r.all_ok() ? kOk : kPropertyViolation;
    }

    int mahler_cmd() {
        std::vector<Rat> coeffs;
        for (const auto& s : split(o_.poly, ',')) coeffs.push_back(parse_rat(s));
        if (coeffs.size() < 2) throw DomainError("mahler-check: --poly needs degree >= 1");
        const MahlerInequality m = mahler_inequality_check(coeffs);
        report_.columns = {"bound", "abs_disc", "margin", "relative"};
        report_.rows.push_back({real(m.bound), real(m.abs_disc), real(m.margin), real(m.relative)});
        return m.relative >= -1e-9 ? kOk : kPropertyViolation;
    }

    const Options& o_;
    std::ostream& out_;
    Limits limits_;
    Place place_ = Place::archimedean();
    std::optional<MapFile> spec_;
    Report report_;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"dyngreen: dynamical heights, Green's functions and discriminant bounds"};
    app.require_subcommand(1);
    app.set_version_flag("--version", version_string());

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"resultant", "Exact homogeneous resultant Res(F1, F2)"},
        {"height", "Local dynamical height of rational points"},
        {"green", "Green's function g(z, w) at one place"},
        {"dsum", "Discriminant sum over a point configuration"},
        {"basis-check", "det(A) = +-Res(F)^r for the basis H(N)"},
        {"tfd", "Transfinite diameter estimates d0_n"},
        {"census", "Small canonical height points in a box"},
        {"green-sum", "Sum of local Green's functions versus canonical heights"},
        {"lattes", "Lattes map of y^2 = x^3 + a x + b"},
        {"bound-report", "Discriminant sum against the lower bounds"},
        {"mahler-check", "|Disc(f)| <= N^N M(f)^(2N-2)"},
    };
    for (const auto& [name, desc] : commands) {
        CLI::App* sub = app.add_subcommand(name, desc);
        sub->add_option("-m,--map", o.map_path, "Map specification (JSON)");
        sub->add_option("--place", o.place, "inf or p:<prime>");
        sub->add_option("--tol", o.tol, "Error tolerance");
        sub->add_option("--seed", o.seed, "Random seed");
        sub->add_option("--format", o.format, "tsv or json")->check(CLI::IsMember({"tsv", "json"}));
        sub->add_option("--workers", o.workers, "Worker threads")->check(CLI::PositiveNumber);
        sub->add_option("--precision", o.precision, "Bits of precision (height)")->check(CLI::Range(53u, 100000u));
        sub->add_option("--point", o.point, "Point a:b (repeatable)");
        sub->add_option("--points", o.points, "Points a:b;c:d;...");
        sub->add_option("--roots-of-unity", o.roots_of_unity, "Use the N-th roots of unity");
        sub->add_option("--random", o.random, "Add N random rational points");
        sub->add_option("--n", o.n_list, "Comma-separated configuration sizes (tfd)");
        sub->add_option("--t", o.t, "Sigma index t");
        sub->add_option("--k", o.k, "Sigma index k");
        sub->add_option("--N", o.N, "Configuration size");
        sub->add_option("--B", o.B, "Census window exponent");
        sub->add_option("--theta", o.theta, "Census height threshold");
        sub->add_option("--a", o.a, "Curve coefficient a");
        sub->add_option("--b", o.b, "Curve coefficient b");
        sub->add_option("--poly", o.poly, "Polynomial coefficients, leading first");
        sub->add_option("--iterations", o.iterations, "Optimizer proposals per restart (tfd)");
        sub->add_option("--restarts", o.restarts, "Optimizer restarts (tfd)");
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kValidationFailure;
    }

    const std::string cmd = app.get_subcommands().front()->get_name();
    try {
        Runner runner(o, out);
        return runner.dispatch(cmd);
    } catch (const ResourceError& e) {
        err << "resource limit: " << e.what() << '\n';
        return kResourceLimit;
    } catch (const ConvergenceError& e) {
        err << "no convergence: " << e.what() << '\n';
        return kResourceLimit;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kValidationFailure;
    }
}

}  // namespace dyngreen::cli
