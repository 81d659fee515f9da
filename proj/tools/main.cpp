#include <CLI11.hpp>

#include <spinchain/catalan.hpp>
#include <spinchain/csv.hpp>
#include <spinchain/distribution.hpp>
#include <spinchain/errors.hpp>
#include <spinchain/kernels.hpp>
#include <spinchain/montecarlo.hpp>
#include <spinchain/perturbation.hpp>
#include <spinchain/rng.hpp>
#include <spinchain/spin_config.hpp>
#include <spinchain/stationary.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace spinchain;

constexpr int kExitUsage = 2;
constexpr int kExitResource = 3;
constexpr int kExitInvariant = 4;

std::vector<double> parse_doubles(const std::string& csv_list) {
    std::vector<double> out;
    std::stringstream ss(csv_list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stod(item));
    }
    if (out.empty()) throw argument_error("empty list '" + csv_list + "'");
    return out;
}

std::vector<long> parse_longs(const std::string& csv_list) {
    std::vector<long> out;
    for (double v : parse_doubles(csv_list)) out.push_back(static_cast<long>(v));
    return out;
}

// Sink selected by --output; defaults to stdout.
struct Output {
    std::ofstream file;
    std::ostream* os = &std::cout;

    explicit Output(const std::string& path) {
        if (path.empty()) return;
        file.open(path);
        if (!file) throw argument_error("cannot open output file '" + path + "'");
        os = &file;
    }
    std::ostream& stream() { return *os; }
};

void echo(std::ostream& os, const std::vector<std::pair<std::string, std::string>>& kv) {
    for (const auto& [k, v] : kv) os << "# " << k << "=" << v << "\n";
}

std::string fmt_int(long long v) { return std::to_string(v); }

// Shared flags: every experiment echoes its resolved configuration and is a
// pure function of it.
struct CommonArgs {
    std::string output;
    std::string config_path;
};

void add_common(CLI::App* cmd, CommonArgs& common) {
    cmd->add_option("--output", common.output, "write the CSV here instead of stdout");
    cmd->add_option("--config", common.config_path,
                    "key=value file applied before flags (flags win)");
}

double resolve_coupling(int length, double coupling, double chill, bool chill_set) {
    if (chill_set) return chill * std::log(static_cast<double>(length));
    return coupling;
}

void require_cap(bool ok, const std::string& message) {
    if (!ok) throw resource_error(message);
}

// --- subcommand bodies -----------------------------------------------------

struct StationaryArgs {
    int length = 0;
    double coupling = 1.0;
    double chill = 0.0;
    bool chill_set = false;
    std::string bc = "empty";
    std::string kind = "irreversible";
    std::string compare = "none";
    CommonArgs common;
};

int run_stationary(const StationaryArgs& a) {
    require_cap(a.length <= 22, "stationary is capped at L <= 22 (exact 2^L solve)");
    const double J = resolve_coupling(a.length, a.coupling, a.chill, a.chill_set);
    ModelParams params{a.length, J, boundary_from_string(a.bc)};
    KernelKind kind = kernel_from_string(a.kind);

    StationaryResult result = exact_stationary_report(kind, params);
    Output out(a.common.output);
    echo(out.stream(), {{"command", "stationary"},
                        {"L", fmt_int(a.length)},
                        {"J", csv::g17(J)},
                        {"bc", a.bc},
                        {"kind", a.kind},
                        {"compare", a.compare}});
    out.stream() << "# residual=" << csv::g17(result.residual) << "\n";
    if (a.compare != "none") {
        Distribution other = a.compare == "gibbs"
                                 ? gibbs(params)
                                 : exact_stationary(kernel_from_string(a.compare), params);
        out.stream() << "# tv_distance=" << csv::g17(tv_distance(result.distribution, other))
                     << "\n";
    }
    result.distribution.write_csv(out.stream());
    return 0;
}

struct KernelArgs {
    int length = 0;
    double coupling = 1.0;
    std::string bc = "plus";
    std::string kind = "irreversible";
    CommonArgs common;
};

int run_kernel(const KernelArgs& a) {
    require_cap(a.length <= 22, "kernel dump is capped at L <= 22");
    ModelParams params{a.length, a.coupling, boundary_from_string(a.bc)};
    SparseKernel m = assemble(kernel_from_string(a.kind), params);
    Output out(a.common.output);
    m.dump(out.stream());
    return 0;
}

struct ExpansionArgs {
    int length = 0;
    int k_max = 1;
    CommonArgs common;
};

int run_expansion(const ExpansionArgs& a) {
    require_cap(a.k_max < 2 ? a.length <= 16 : a.length <= 14,
                "expansion is capped at L <= 16 (L <= 14 for k >= 2)");
    if (a.k_max < 0) throw argument_error("--kmax must be >= 0");
    ModelParams params{a.length, 1.0, Boundary::Plus};
    Output out(a.common.output);
    echo(out.stream(), {{"command", "expansion"},
                        {"L", fmt_int(a.length)},
                        {"kmax", fmt_int(a.k_max)}});
    out.stream() << "k,index,config,value\n";
    DeviationOperator op(params);
    Distribution term = Distribution::point_mass(a.length, (std::uint64_t{1} << a.length) - 1);
    for (int k = 0; k <= a.k_max; ++k) {
        if (k > 0) term.values = op.apply_left(term.values);
        for (std::uint64_t idx = 0; idx < term.values.size(); ++idx)
            out.stream() << k << "," << idx << ","
                         << SpinConfig::from_index(a.length, idx).to_string() << ","
                         << csv::g17(term.values[idx]) << "\n";
    }
    return 0;
}

struct Theorem1Args {
    int length = 0;
    std::string c_list = "0.75,1.0,1.25,1.5";
    CommonArgs common;
};

int run_theorem1(const Theorem1Args& a) {
    require_cap(a.length <= 14, "theorem1 is capped at L <= 14");
    auto rows = theorem1_scan(a.length, parse_doubles(a.c_list));
    Output out(a.common.output);
    echo(out.stream(),
         {{"command", "theorem1"}, {"L", fmt_int(a.length)}, {"c", a.c_list}});
    out.stream() << "L,c,J,dtv,eps2,ratio\n";
    for (const auto& r : rows)
        out.stream() << r.length << "," << csv::g17(r.c) << "," << csv::g17(r.coupling) << ","
                     << csv::g17(r.dtv) << "," << csv::g17(r.eps2) << "," << csv::g17(r.ratio)
                     << "\n";
    return 0;
}

struct Theorem2Args {
    std::string m_list = "1,2,3";
    std::string i_list = "1000,4000,16000";
    CommonArgs common;
};

int run_theorem2(const Theorem2Args& a) {
    auto ms = parse_longs(a.m_list);
    auto is = parse_longs(a.i_list);
    for (long i : is) require_cap(i <= 1'000'000, "theorem2 is capped at i <= 1e6");
    Output out(a.common.output);
    echo(out.stream(), {{"command", "theorem2"}, {"m", a.m_list}, {"i", a.i_list}});
    out.stream() << "i,m,pi1,deficit,deficit_sqrt_i\n";
    for (long m : ms) {
        for (const auto& [i, scaled] : theorem2_constant(m, is)) {
            const double deficit = scaled / std::sqrt(static_cast<double>(i));
            out.stream() << i << "," << m << "," << csv::g17(1.0 - deficit) << ","
                         << csv::g17(deficit) << "," << csv::g17(scaled) << "\n";
        }
    }
    return 0;
}

struct Theorem3Args {
    std::string l_list = "50,100,200,400";
    double chill = 1.0;
    CommonArgs common;
};

int run_theorem3(const Theorem3Args& a) {
    auto ls = parse_longs(a.l_list);
    for (long L : ls) require_cap(L <= 1'000'000, "theorem3 is capped at L <= 1e6");
    Output out(a.common.output);
    echo(out.stream(),
         {{"command", "theorem3"}, {"L", a.l_list}, {"c", csv::g17(a.chill)}});
    out.stream() << "L,J,pi_leq1_m,gibbs_m,ratio\n";
    for (long L : ls) {
        const double J = a.chill * std::log(static_cast<double>(L));
        const double first_order =
            std::exp(-4.0 * J) * first_order_minus_moment(static_cast<int>(L));
        const double gibbs_m = gibbs_minus_moment(static_cast<int>(L), J, Boundary::Plus);
        out.stream() << L << "," << csv::g17(J) << "," << csv::g17(first_order) << ","
                     << csv::g17(gibbs_m) << "," << csv::g17(first_order / gibbs_m) << "\n";
    }
    return 0;
}

struct TunnelArgs {
    int length = 0;
    double coupling = 2.5;
    double chill = 0.0;
    bool chill_set = false;
    std::string bc = "empty";
    std::string kind = "irreversible";
    int replicas = 50;
    std::uint64_t seed = 1;
    std::uint64_t stream = 0;
    std::uint64_t budget = 10'000'000'000ull;
    CommonArgs common;
};

int run_tunnel(const TunnelArgs& a) {
    require_cap(a.length <= (1 << 20), "Monte Carlo is capped at L <= 2^20");
    require_cap(a.replicas <= 1'000'000, "replicas capped at 1e6");
    const double J = resolve_coupling(a.length, a.coupling, a.chill, a.chill_set);
    ModelParams params{a.length, J, boundary_from_string(a.bc)};
    TunnelingStats stats = tunneling_time(kernel_from_string(a.kind), params, a.replicas,
                                          {a.seed, a.stream}, a.budget);
    Output out(a.common.output);
    echo(out.stream(), {{"command", "tunnel"},
                        {"L", fmt_int(a.length)},
                        {"J", csv::g17(J)},
                        {"bc", a.bc},
                        {"kind", a.kind},
                        {"replicas", fmt_int(a.replicas)},
                        {"seed", fmt_int(static_cast<long long>(a.seed))},
                        {"stream", fmt_int(static_cast<long long>(a.stream))},
                        {"budget", fmt_int(static_cast<long long>(a.budget))}});
    if (!stats.censored_replicas.empty()) {
        out.stream() << "# censored_replicas=";
        for (std::size_t i = 0; i < stats.censored_replicas.size(); ++i)
            out.stream() << (i ? "," : "") << stats.censored_replicas[i];
        out.stream() << "\n";
    }
    out.stream() << "replica,steps\n";
    for (std::size_t r = 0; r < stats.samples.size(); ++r)
        out.stream() << r << "," << stats.samples[r] << "\n";
    out.stream() << "L,J,kind,mean,var,ci_lo,ci_hi,censored\n";
    out.stream() << a.length << "," << csv::g17(J) << "," << a.kind << ","
                 << csv::g17(stats.mean) << "," << csv::g17(stats.variance) << ","
                 << csv::g17(stats.ci_lo) << "," << csv::g17(stats.ci_hi) << ","
                 << stats.censored_replicas.size() << "\n";
    return 0;
}

struct CurrentsArgs {
    int length = 0;
    double coupling = 1.0;
    std::string bc = "plus";
    std::string kind = "irreversible";
    int kolmogorov = 0;
    CommonArgs common;
};

int run_currents(const CurrentsArgs& a) {
    require_cap(a.length <= 16, "currents is capped at L <= 16");
    ModelParams params{a.length, a.coupling, boundary_from_string(a.bc)};
    KernelKind kind = kernel_from_string(a.kind);
    Distribution pi = exact_stationary(kind, params);
    CurrentReport report = currents(pi, kind, params);

    Output out(a.common.output);
    echo(out.stream(), {{"command", "currents"},
                        {"L", fmt_int(a.length)},
                        {"J", csv::g17(a.coupling)},
                        {"bc", a.bc},
                        {"kind", a.kind},
                        {"kolmogorov", fmt_int(a.kolmogorov)}});
    if (a.kolmogorov > 0) {
        auto loop = kolmogorov_check(kind, params, a.kolmogorov);
        if (loop) {
            out.stream() << "# kolmogorov=violated start=" << loop->start.to_string()
                         << " sites=";
            for (std::size_t i = 0; i < loop->sites.size(); ++i)
                out.stream() << (i ? "," : "") << loop->sites[i];
            out.stream() << " forward=" << csv::g17(loop->forward_product)
                         << " backward=" << csv::g17(loop->backward_product) << "\n";
        } else {
            out.stream() << "# kolmogorov=none\n";
        }
    }
    out.stream() << "# max_abs_divergence=" << csv::g17(report.max_abs_divergence()) << "\n";
    out.stream() << "src,dst,site,current\n";
    for (const auto& e : report.edges)
        out.stream() << e.src << "," << e.dst << "," << e.site << "," << csv::g17(e.current)
                     << "\n";
    return 0;
}

struct CatalanArgs {
    int triangle = -1;
    long lemma41_m = 0;
    long lmax = 400;
    long first_passage_m = 0;
    long nmax = 128;
    CommonArgs common;
};

int run_catalan(const CatalanArgs& a) {
    const int modes = (a.triangle >= 0) + (a.lemma41_m > 0) + (a.first_passage_m > 0);
    if (modes != 1)
        throw argument_error(
            "pick exactly one of --triangle N, --lemma41 M, --first-passage M");
    Output out(a.common.output);
    if (a.triangle >= 0) {
        require_cap(a.triangle <= 500, "triangle rows capped at n <= 500");
        echo(out.stream(), {{"command", "catalan"}, {"triangle", fmt_int(a.triangle)}});
        out.stream() << "n,k,value\n";
        for (long n = 0; n <= a.triangle; ++n)
            for (long k = 0; k <= n; ++k)
                out.stream() << n << "," << k << "," << catalan_triangle(n, k).str() << "\n";
    } else if (a.lemma41_m > 0) {
        require_cap(a.lmax <= 100'000, "lemma41 partial sums capped at l_max <= 1e5");
        echo(out.stream(), {{"command", "catalan"},
                            {"lemma41", fmt_int(a.lemma41_m)},
                            {"lmax", fmt_int(a.lmax)}});
        out.stream() << "m,l_max,partial_sum\n";
        out.stream() << a.lemma41_m << "," << a.lmax << ","
                     << csv::g17(lemma41_partial(a.lemma41_m, a.lmax).convert_to<double>())
                     << "\n";
    } else {
        require_cap(a.nmax <= 4096, "first-passage table capped at n_max <= 4096");
        echo(out.stream(), {{"command", "catalan"},
                            {"first_passage", fmt_int(a.first_passage_m)},
                            {"nmax", fmt_int(a.nmax)}});
        out.stream() << "m,n,prob\n";
        FirstPassageTable table = srw_first_passage(a.first_passage_m, a.nmax);
        for (long n = 0; n <= table.n_max; ++n)
            out.stream() << table.target << "," << n << ","
                         << csv::g17(table.pmf[n].convert_to<double>()) << "\n";
    }
    return 0;
}

// Expand "--config FILE" into the key=value pairs of that file, inserted
// right after the subcommand token so explicit flags override them.
std::vector<std::string> expand_config(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    std::string path;
    for (std::size_t i = 1; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
    }
    if (path.empty()) return args;
    std::ifstream in(path);
    if (!in) throw argument_error("cannot read config file '" + path + "'");
    std::vector<std::string> injected;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw argument_error("config line without '=': " + line);
        injected.push_back("--" + line.substr(0, eq) + "=" + line.substr(eq + 1));
    }
    // args[1] is the subcommand; keep it first.
    std::vector<std::string> out;
    out.push_back(args[0]);
    if (args.size() > 1) out.push_back(args[1]);
    out.insert(out.end(), injected.begin(), injected.end());
    for (std::size_t i = 2; i < args.size(); ++i) out.push_back(args[i]);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spinchain: irreversible single-spin-flip dynamics of a 1d spin chain"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    StationaryArgs st;
    auto* cmd_st = app.add_subcommand(
        "stationary", "exact stationary measure of a kernel, optionally compared to Gibbs");
    cmd_st->add_option("--L", st.length, "chain length")->required();
    cmd_st->add_option("--J", st.coupling, "coupling");
    cmd_st->add_option("--c", st.chill, "chilled coupling J = c log L")
        ->each([&st](const std::string&) { st.chill_set = true; });
    cmd_st->add_option("--bc", st.bc, "boundary: empty|plus");
    cmd_st->add_option("--kind", st.kind, "kernel: irreversible|glauber");
    cmd_st->add_option("--compare", st.compare, "none|gibbs|irreversible|glauber");
    add_common(cmd_st, st.common);

    KernelArgs ke;
    auto* cmd_ke = app.add_subcommand("kernel", "dump a kernel as sparse triplets");
    cmd_ke->add_option("--L", ke.length, "chain length")->required();
    cmd_ke->add_option("--J", ke.coupling, "coupling");
    cmd_ke->add_option("--bc", ke.bc, "boundary: empty|plus");
    cmd_ke->add_option("--kind", ke.kind,
                       "kernel: irreversible|glauber|zero-temperature|delta-p");
    add_common(cmd_ke, ke.common);

    ExpansionArgs ex;
    auto* cmd_ex = app.add_subcommand(
        "expansion", "low-temperature expansion terms pi^(k) (plus boundary; J-independent)");
    cmd_ex->add_option("--L", ex.length, "chain length")->required();
    cmd_ex->add_option("--kmax", ex.k_max, "highest order to emit");
    add_common(cmd_ex, ex.common);

    Theorem1Args t1;
    auto* cmd_t1 = app.add_subcommand(
        "theorem1", "distance between the stationary measure and its first order, chilled scan");
    cmd_t1->add_option("--L", t1.length, "chain length")->required();
    cmd_t1->add_option("--c", t1.c_list, "comma list of chilled parameters");
    add_common(cmd_t1, t1.common);

    Theorem2Args t2;
    auto* cmd_t2 = app.add_subcommand(
        "theorem2", "first-order interval weights: deficit * sqrt(i) stabilization");
    cmd_t2->add_option("--m", t2.m_list, "comma list of interval lengths");
    cmd_t2->add_option("--i", t2.i_list, "comma list of interval positions");
    add_common(cmd_t2, t2.common);

    Theorem3Args t3;
    auto* cmd_t3 = app.add_subcommand(
        "theorem3", "first-order vs Gibbs minus moment at J = c log L");
    cmd_t3->add_option("--L", t3.l_list, "comma list of chain lengths");
    cmd_t3->add_option("--c", t3.chill, "chilled parameter (J = c log L)");
    add_common(cmd_t3, t3.common);

    TunnelArgs tu;
    auto* cmd_tu = app.add_subcommand(
        "tunnel", "first hitting time of all-minus from all-plus, replicated");
    cmd_tu->add_option("--L", tu.length, "chain length")->required();
    cmd_tu->add_option("--J", tu.coupling, "coupling");
    cmd_tu->add_option("--c", tu.chill, "chilled coupling J = c log L")
        ->each([&tu](const std::string&) { tu.chill_set = true; });
    cmd_tu->add_option("--bc", tu.bc, "boundary: empty|plus");
    cmd_tu->add_option("--kind", tu.kind, "kernel: irreversible|glauber|zero-temperature");
    cmd_tu->add_option("--replicas", tu.replicas, "independent replicas");
    cmd_tu->add_option("--seed", tu.seed, "rng seed");
    cmd_tu->add_option("--stream", tu.stream, "base stream id (replica r uses stream+r)");
    cmd_tu->add_option("--budget", tu.budget, "per-replica step budget (censoring)");
    add_common(cmd_tu, tu.common);

    CurrentsArgs cu;
    auto* cmd_cu = app.add_subcommand(
        "currents", "stationary probability currents and the loop criterion");
    cmd_cu->add_option("--L", cu.length, "chain length")->required();
    cmd_cu->add_option("--J", cu.coupling, "coupling");
    cmd_cu->add_option("--bc", cu.bc, "boundary: empty|plus");
    cmd_cu->add_option("--kind", cu.kind, "kernel: irreversible|glauber");
    cmd_cu->add_option("--kolmogorov", cu.kolmogorov,
                       "search flip loops up to this length for a violation");
    add_common(cmd_cu, cu.common);

    CatalanArgs ca;
    auto* cmd_ca = app.add_subcommand("catalan", "exact combinatorics tables");
    cmd_ca->add_option("--triangle", ca.triangle, "emit triangle rows 0..n");
    cmd_ca->add_option("--lemma41", ca.lemma41_m, "partial sum for this m");
    cmd_ca->add_option("--lmax", ca.lmax, "last l of the partial sum");
    cmd_ca->add_option("--first-passage", ca.first_passage_m,
                       "first-passage pmf of this level");
    cmd_ca->add_option("--nmax", ca.nmax, "last step of the pmf table");
    add_common(cmd_ca, ca.common);

    try {
        auto args = expand_config(argc, argv);
        std::vector<const char*> cargs;
        cargs.reserve(args.size());
        for (const auto& s : args) cargs.push_back(s.c_str());
        app.parse(static_cast<int>(cargs.size()), cargs.data());

        if (cmd_st->parsed()) return run_stationary(st);
        if (cmd_ke->parsed()) return run_kernel(ke);
        if (cmd_ex->parsed()) return run_expansion(ex);
        if (cmd_t1->parsed()) return run_theorem1(t1);
        if (cmd_t2->parsed()) return run_theorem2(t2);
        if (cmd_t3->parsed()) return run_theorem3(t3);
        if (cmd_tu->parsed()) return run_tunnel(tu);
        if (cmd_cu->parsed()) return run_currents(cu);
        if (cmd_ca->parsed()) return run_catalan(ca);
        return kExitUsage;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    } catch (const resource_error& e) {
        std::cerr << "spinchain: resource cap: " << e.what() << "\n";
        return kExitResource;
    } catch (const invariant_error& e) {
        std::cerr << "spinchain: invariant failure: " << e.what() << "\n";
        return kExitInvariant;
    } catch (const regime_error& e) {
        std::cerr << "spinchain: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::logic_error& e) {
        std::cerr << "spinchain: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "spinchain: " << e.what() << "\n";
        return kExitInvariant;
    }
}
