// fdwave: command-line front end for the Friedlander-model toolkit.
//
//   fdwave <subcommand> [flags] [--out FILE] [--manifest FILE] [--threads N]
//   fdwave --from-manifest FILE [overrides...]
//
// Exit status: 0 success, 2 bad arguments or parameters, 3 accuracy failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fd/fd.hpp"

namespace {

using json = nlohmann::ordered_json;

std::string number(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, r.ptr);
}

// nlohmann prints the shortest round-trip form; results use 17 digits.
void write_json(std::ostream& os, const json& j, int indent = 0) {
    const std::string pad(static_cast<std::size_t>(indent + 2), ' '), end(static_cast<std::size_t>(indent), ' ');
    switch (j.type()) {
        case json::value_t::object: {
            if (j.empty()) {
                os << "{}";
                break;
            }
            os << "{\n";
            bool first = true;
            for (const auto& [k, v] : j.items()) {
                if (!first) os << ",\n";
                first = false;
                os << pad << json(k).dump() << ": ";
                write_json(os, v, indent + 2);
            }
            os << "\n" << end << "}";
            break;
        }
        case json::value_t::array: {
            if (j.empty()) {
                os << "[]";
                break;
            }
            os << "[\n";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) os << ",\n";
                os << pad;
                write_json(os, j[i], indent + 2);
            }
            os << "\n" << end << "]";
            break;
        }
        case json::value_t::number_float: os << number(j.get<double>()); break;
        default: os << j.dump();
    }
}

struct Output {
    std::string path;
    std::ostringstream buf;

    void flush() const {
        if (path.empty() || path == "-") {
            std::cout << buf.str();
            return;
        }
        std::ofstream f(path, std::ios::binary);
        if (!f) throw fd::ArgumentError("cannot write " + path);
        f << buf.str();
    }
};

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        double v = 0;
        const auto r = std::from_chars(item.data(), item.data() + item.size(), v);
        if (r.ec != std::errc{} || r.ptr != item.data() + item.size())
            throw fd::ArgumentError("not a number: " + item);
        out.push_back(v);
    }
    if (out.empty()) throw fd::ArgumentError("empty list");
    return out;
}

struct Args {
    std::string out, manifest;
    int threads = 0;

    int count = 16;

    int k = 1;
    double theta = 1;
    int grid = 200;

    int m = 0;
    double h = 1.0 / 128, a = 0.25, gamma = 0.25, t = 0, x = 0.25, y = 0;
    int kmax = 0;
    double tol = 1e-10;
    bool low_freq = false;
    int d = 2, J = 2;
    std::string split = "none";
    double M = 64;

    double c = 2.338107410459767;
    std::string z = "degenerate";
    std::string t_list = "100,200,400,800,1600,3200,6400,10000";

    double bump_center = 2.338107410459767, bump_width = 0.3;
    int nmax = 400;

    std::string x_opt, y_opt, a_opt;

    double t_min = 1, t_max = 10;
    int t_count = 16;
    std::string spacing = "geometric";

    std::string in;
    bool peaks_only = false;
};

fd::LowFreqOptions low_freq_options(const Args& a) {
    fd::LowFreqOptions o;
    o.J = a.J;
    o.M = a.M;
    o.tol = a.tol;
    o.kmax = a.kmax;
    if (a.split == "none") o.split = fd::LowFreqSplit::none;
    else if (a.split == "chi0") o.split = fd::LowFreqSplit::chi0_part;
    else if (a.split == "complement") o.split = fd::LowFreqSplit::complement;
    else throw fd::ArgumentError("--split must be none, chi0 or complement");
    return o;
}

std::optional<double> optional_number(const std::string& s) {
    if (s.empty()) return std::nullopt;
    return parse_list(s).at(0);
}

void run_airy_table(const Args& a, Output& o) {
    if (a.count < 1) throw fd::ArgumentError("--count must be >= 1");
    const fd::AiryTable table(a.count);
    json rec = json::array();
    for (int k = 1; k <= table.count(); ++k)
        rec.push_back({{"k", k}, {"omega_k", table.omega(k)}, {"aiprime", table.aiprime(k)},
                       {"lprime", table.lprime_at_zero(k)}});
    write_json(o.buf, json{{"records", rec}});
    o.buf << "\n";
}

void run_modes(const Args& a, Output& o) {
    if (a.grid < 2) throw fd::ArgumentError("--grid must be >= 2");
    const auto e = fd::eigenmode(a.k, a.theta);
    const double end = (fd::airy_table().omega(a.k) + 10) / std::cbrt(a.theta * a.theta);
    o.buf << "x,value\n";
    for (int i = 0; i < a.grid; ++i) {
        const double x = end * i / (a.grid - 1);
        o.buf << number(x) << "," << number(e(x)) << "\n";
    }
}

void run_green_eval(const Args& a, Output& o) {
    fd::FieldValue v;
    if (a.low_freq) {
        v = fd::green_low_freq(a.m, a.t, a.x, a.a, a.y, a.d, low_freq_options(a));
    } else {
        fd::GreenQuery q;
        q.m = a.m;
        q.h = a.h;
        q.a = a.a;
        q.gamma = a.gamma;
        q.t = a.t;
        q.x = a.x;
        q.y = a.y;
        q.kmax = a.kmax;
        q.tol = a.tol;
        v = fd::green_high_freq(q);
    }
    write_json(o.buf, json{{"value_re", v.value.real()},
                           {"value_im", v.value.imag()},
                           {"mode_count", v.mode_count},
                           {"error_estimate", v.error_estimate},
                           {"empty_window", v.empty_window}});
    o.buf << "\n";
}

void run_model_integral(const Args& a, Output& o) {
    double z = 0;
    if (a.z == "degenerate") {
        const auto p = fd::find_degenerate(a.m, a.c);
        if (!p) throw fd::RegimeError("no degenerate point for these (m, c); pass --z");
        z = p->z0;
    } else {
        z = parse_list(a.z).at(0);
    }
    o.buf << "t,abs_value\n";
    for (double t : parse_list(a.t_list)) o.buf << number(t) << "," << number(std::abs(fd::model_integral(a.m, a.c, z, t))) << "\n";
}

void run_poisson_check(const Args& a, Output& o) {
    const double lo = std::max(0.0, a.bump_center - a.bump_width / 2), hi = a.bump_center + a.bump_width / 2;
    const auto r = fd::airy_poisson_check(fd::bump(a.bump_center, a.bump_width), lo, hi, a.nmax);
    json j{{"lhs", r.lhs}, {"lhs_imag", r.lhs_imag}, {"rhs", r.rhs}, {"abserr", std::abs(r.lhs - r.rhs)}};
    j["relerr"] = r.rhs != 0 ? std::abs(r.lhs - r.rhs) / std::abs(r.rhs) : std::nan("");
    j["zeros_in_support"] = r.zeros_in_support;
    write_json(o.buf, j);
    o.buf << "\n";
}

void run_overlap_count(const Args& a, Output& o) {
    const double src = optional_number(a.a_opt).value_or(a.gamma);
    const double x = optional_number(a.x_opt).value_or(src);
    const double y = optional_number(a.y_opt).value_or(-a.t * std::sqrt(1 + a.gamma));
    const auto r = fd::overlap_count(a.t, x, y, a.gamma, a.h, a.m, src);
    write_json(o.buf, json{{"t", r.t},
                           {"x", r.x},
                           {"y", r.y},
                           {"gamma", r.gamma},
                           {"h", r.h},
                           {"m", r.m},
                           {"members", r.members},
                           {"count", r.members.size()},
                           {"bound_rhs", r.bound_rhs}});
    o.buf << "\n";
}

void run_decay_scan(const Args& a, Output& o) {
    if (a.t_count < 2) throw fd::ArgumentError("--t-count must be >= 2");
    std::vector<double> ts;
    if (a.spacing == "geometric") {
        ts = fd::geometric_grid(a.t_min, a.t_max, a.t_count);
    } else if (a.spacing == "linear") {
        if (!(a.t_max > a.t_min)) throw fd::ArgumentError("--t-max must exceed --t-min");
        for (int i = 0; i < a.t_count; ++i) ts.push_back(a.t_min + (a.t_max - a.t_min) * i / (a.t_count - 1));
    } else {
        throw fd::ArgumentError("--spacing must be geometric or linear");
    }
    const fd::DecayCurve c =
        a.low_freq ? fd::decay_scan_low(a.m, a.a, ts, low_freq_options(a)) : fd::decay_scan_high(a.m, a.h, a.a, a.gamma, ts);
    o.buf << "t,sup,argmax_x,argmax_y\n";
    for (std::size_t i = 0; i < ts.size(); ++i) {
        o.buf << number(c.t_values[i]) << "," << number(c.sup_values[i]) << "," << number(c.argmax_points[i].first)
              << "," << number(c.argmax_points[i].second) << "\n";
        if (c.warnings[i]) std::cerr << "warning: argmax at the refinement-box edge, t = " << number(c.t_values[i]) << "\n";
    }
}

void run_decay_fit(const Args& a, Output& o) {
    std::ifstream f(a.in);
    if (!f) throw fd::ArgumentError("cannot read " + a.in);
    fd::DecayCurve c;
    std::string line;
    bool header = true;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        if (header) {
            header = false;
            if (line.rfind("t,", 0) == 0) continue;
        }
        std::stringstream ss(line);
        std::string t, s;
        if (!std::getline(ss, t, ',') || !std::getline(ss, s, ',')) throw fd::ArgumentError("bad CSV row: " + line);
        c.t_values.push_back(parse_list(t).at(0));
        c.sup_values.push_back(parse_list(s).at(0));
    }
    const auto r = fd::fit_exponent(c, a.peaks_only);
    json j{{"exponent", r.exponent}, {"residual", r.residual}, {"constant", r.constant}, {"degenerate", r.degenerate}};
    if (a.peaks_only) j["peaks"] = c.peaks.size();
    write_json(o.buf, j);
    o.buf << "\n";
}

// argv for a re-run: the manifest's recorded flags, then any overrides.
std::vector<std::string> from_manifest(const std::string& path, const std::vector<std::string>& extra) {
    std::ifstream f(path);
    if (!f) throw fd::ArgumentError("cannot read manifest " + path);
    const json m = json::parse(f);
    std::vector<std::string> out{"fdwave", m.at("subcommand").get<std::string>()};
    for (const auto& [k, v] : m.at("args").items()) {
        if (v.is_boolean()) {
            if (v.get<bool>()) out.push_back("--" + k);
        } else {
            out.push_back("--" + k);
            out.push_back(v.get<std::string>());
        }
    }
    out.insert(out.end(), extra.begin(), extra.end());
    return out;
}

int run(std::vector<std::string> argv) {
    for (std::size_t i = 1; i < argv.size(); ++i)
        if (argv[i] == "--from-manifest") {
            if (i + 1 >= argv.size()) throw fd::ArgumentError("--from-manifest needs a file");
            std::vector<std::string> extra(argv.begin() + 1, argv.end());
            extra.erase(extra.begin() + static_cast<long>(i - 1), extra.begin() + static_cast<long>(i + 1));
            return run(from_manifest(argv[i + 1], extra));
        }

    Args a;
    CLI::App app{"Friedlander-model dispersion toolkit"};
    app.set_help_flag("--help", "print this help and exit");
    app.require_subcommand(1);
    // --h is the semiclassical parameter, so help is long-form only.
    auto add = [&](const char* name, const char* what) {
        CLI::App* s = app.add_subcommand(name, what);
        s->set_help_flag("--help", "print this help and exit");
        return s;
    };
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast)->always_capture_default();
    app.add_option("--threads", a.threads, "worker cap (default FD_THREADS, else all cores)");

    auto common = [&](CLI::App* s) {
        s->add_option("--out", a.out, "output file (default stdout)");
        s->add_option("--manifest", a.manifest, "manifest file (default <out>.manifest.json, else stderr)");
    };
    auto* airy = add("airy-table", "Airy zeros with Ai' and L' at each zero");
    airy->add_option("--count", a.count, "number of zeros");
    common(airy);

    auto* modes = add("modes", "sampled gallery mode e_k(x, theta)");
    modes->add_option("--k", a.k, "mode index");
    modes->add_option("--theta", a.theta, "transverse frequency");
    modes->add_option("--grid", a.grid, "number of samples");
    common(modes);

    auto field = [&](CLI::App* s) {
        s->add_option("--m", a.m, "mass (0 or 1)");
        s->add_option("--h", a.h, "semiclassical parameter");
        s->add_option("--a", a.a, "source height");
        s->add_option("--gamma", a.gamma, "dyadic height of the modes");
    };
    auto* green = add("green-eval", "localized Green function at one point");
    field(green);
    green->add_option("--t", a.t);
    green->add_option("--x", a.x);
    green->add_option("--y", a.y, "transverse coordinate (|y| in d >= 3)");
    green->add_option("--kmax", a.kmax, "mode cap (0: whole window)");
    green->add_option("--tol", a.tol, "relative quadrature tolerance");
    green->add_flag("--low-freq", a.low_freq, "low-frequency part instead of G_{h,gamma}");
    green->add_option("--d", a.d, "dimension (low frequency)");
    green->add_option("--J", a.J, "dyadic rings (low frequency)");
    green->add_option("--split", a.split, "none | chi0 | complement");
    green->add_option("--M", a.M, "chi0 split scale");
    common(green);

    auto* model = add("model-integral", "|v(z, t)| for the one-dimensional model");
    model->add_option("--m", a.m);
    model->add_option("--c", a.c);
    model->add_option("--z", a.z, "z, or 'degenerate' for the degenerate critical value");
    model->add_option("--t-list", a.t_list, "comma-separated times");
    common(model);

    auto* poisson = add("poisson-check", "Airy-Poisson identity on a bump");
    poisson->add_option("--bump-center", a.bump_center);
    poisson->add_option("--bump-width", a.bump_width);
    poisson->add_option("--nmax", a.nmax);
    common(poisson);

    auto* overlap = add("overlap-count", "reflected waves meeting near (t, x, y)");
    overlap->add_option("--t", a.t);
    overlap->add_option("--gamma", a.gamma);
    overlap->add_option("--h", a.h);
    overlap->add_option("--m", a.m);
    overlap->add_option("--a", a.a_opt, "source height (default gamma)");
    overlap->add_option("--x", a.x_opt, "default: source height");
    overlap->add_option("--y", a.y_opt, "default: -t sqrt(1+gamma)");
    common(overlap);

    auto* scan = add("decay-scan", "sup-norm curve over a t grid (CSV)");
    field(scan);
    scan->add_option("--t-min", a.t_min);
    scan->add_option("--t-max", a.t_max);
    scan->add_option("--t-count", a.t_count);
    scan->add_option("--spacing", a.spacing, "geometric | linear");
    scan->add_flag("--low-freq", a.low_freq, "d = 2 low-frequency part");
    scan->add_option("--J", a.J);
    scan->add_option("--tol", a.tol);
    common(scan);

    auto* fit = add("decay-fit", "power-law fit of a decay-scan curve");
    fit->add_option("--in", a.in, "curve CSV")->required();
    fit->add_flag("--peaks-only", a.peaks_only, "fit through detected peaks");
    common(fit);

    std::vector<const char*> cargv;
    for (const auto& s : argv) cargv.push_back(s.c_str());
    try {
        app.parse(static_cast<int>(cargv.size()), cargv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    if (a.threads > 0) fd::set_max_threads(a.threads);

    CLI::App* sub = app.get_subcommands().front();
    Output o;
    o.path = a.out;
    const std::string name = sub->get_name();
    if (name == "airy-table") run_airy_table(a, o);
    else if (name == "modes") run_modes(a, o);
    else if (name == "green-eval") run_green_eval(a, o);
    else if (name == "model-integral") run_model_integral(a, o);
    else if (name == "poisson-check") run_poisson_check(a, o);
    else if (name == "overlap-count") run_overlap_count(a, o);
    else if (name == "decay-scan") run_decay_scan(a, o);
    else run_decay_fit(a, o);
    o.flush();

    // Only flags given on the command line are replayed; defaults are listed
    // for reference (their captured text may be rounded).
    json args = json::object(), defaults = json::object();
    for (const CLI::Option* opt : sub->get_options()) {
        const std::string flag = opt->get_single_name();
        if (flag == "help" || flag == "out" || flag == "manifest") continue;
        if (opt->get_type_size() == 0) {
            if (opt->count() > 0) args[flag] = true;
        } else if (opt->count() > 0) {
            args[flag] = opt->results().back();
        } else if (!opt->get_default_str().empty()) {
            defaults[flag] = opt->get_default_str();
        }
    }
    json manifest{{"tool", "fdwave"},
                  {"version", fd::kVersion},
                  {"subcommand", name},
                  {"args", args},
                  {"defaults", defaults},
                  {"tolerances", {{"quadrature", a.tol}, {"n_window", fd::kWindowTol}}}};
    std::ostringstream ms;
    write_json(ms, manifest);
    ms << "\n";
    std::string mpath = a.manifest;
    if (mpath.empty() && !a.out.empty() && a.out != "-") mpath = a.out + ".manifest.json";
    if (mpath.empty()) {
        std::cerr << ms.str();
    } else {
        std::ofstream f(mpath, std::ios::binary);
        if (!f) throw fd::ArgumentError("cannot write " + mpath);
        f << ms.str();
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(std::vector<std::string>(argv, argv + argc));
    } catch (const fd::AccuracyError& e) {
        std::cerr << "accuracy error: " << e.what() << " (estimate " << number(e.estimate) << ", bound "
                  << number(e.bound) << ")\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "argument error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 2;
    } catch (const std::out_of_range& e) {
        std::cerr << "range error: " << e.what() << "\n";
        return 2;
    } catch (const fd::RegimeError& e) {
        std::cerr << "regime error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
