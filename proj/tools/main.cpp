#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pan/asymptotics.hpp"
#include "pan/brownian.hpp"
#include "pan/errors.hpp"
#include "pan/feynman_kac.hpp"
#include "pan/hardy.hpp"
#include "pan/io.hpp"
#include "pan/poisson_field.hpp"
#include "pan/potential.hpp"
#include "pan/spectral.hpp"

namespace {

using nlohmann::json;

struct Common {
    std::uint64_t seed = 12345;
    int threads = 1; // worker cap; runs are bitwise identical at any value
    std::string out;
    std::string format = "csv";
};

std::ostream& open_out(const Common& c, std::ofstream& file) {
    if (c.out.empty()) return std::cout;
    file.open(c.out);
    if (!file) throw pan::domain_error("cannot open output path: " + c.out);
    return file;
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        if (item[0] == 'e')
            out.push_back(std::stod(item.substr(1))); // eN means log value N
        else
            out.push_back(std::stod(item));
    }
    if (out.empty()) throw pan::domain_error("empty list: " + s);
    return out;
}

pan::SlowlyVaryingSpec parse_l(const std::string& s) {
    pan::SlowlyVaryingSpec l;
    auto colon = s.find(':');
    std::string name = s.substr(0, colon);
    double arg = colon == std::string::npos ? 1.0 : std::stod(s.substr(colon + 1));
    if (name == "const") {
        l.family = pan::SvFamily::constant;
        l.value = arg;
    } else if (name == "logpow") {
        l.family = pan::SvFamily::log_pow;
        l.exponent = arg;
    } else if (name == "loglogpow") {
        l.family = pan::SvFamily::loglog_pow;
        l.exponent = arg;
    } else if (name == "logxloglogpow") {
        l.family = pan::SvFamily::log_times_loglog_pow;
        l.exponent = arg;
    } else {
        throw pan::domain_error("unknown l family: " + name);
    }
    return l;
}

const char* branch_name(pan::Branch b) {
    switch (b) {
        case pan::Branch::zero: return "zero";
        case pan::Branch::infinite: return "infinite";
        default: return "inconclusive";
    }
}

std::string config_comment(const json& cfg) {
    std::string s = "# config:";
    for (auto it = cfg.begin(); it != cfg.end(); ++it)
        s += " " + it.key() + "=" + (it.value().is_string() ? it.value().get<std::string>()
                                                           : it.value().dump());
    return s;
}

void emit_json(const Common& c, json& j, const json& cfg) {
    j["config"] = cfg;
    j["seed"] = c.seed;
    std::ofstream file;
    open_out(c, file) << j.dump(2) << "\n";
}

} // namespace

int run(int argc, char** argv) {
    CLI::App app{"Numerics lab for the critical renormalized-Poisson-potential model"};
    app.require_subcommand(1);
    app.set_config("--config")->configurable(false);
    app.allow_config_extras(false);

    Common c;
    if (const char* env = std::getenv("PAN_THREADS")) c.threads = std::atoi(env);
    app.add_option("--seed", c.seed, "master RNG seed")->capture_default_str();
    app.add_option("--threads", c.threads, "max worker count (results are thread-invariant)");
    app.add_option("--out", c.out, "output path (default stdout)");
    app.add_option("--format", c.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();

    // field
    auto* field = app.add_subcommand("field", "sample a Poisson field and dump it as JSON");
    double f_half = 1.0, f_intensity = 1.0;
    field->add_option("--half-width", f_half, "window half width")->capture_default_str();
    field->add_option("--intensity", f_intensity, "points per unit volume")->capture_default_str();

    // potential
    auto* pot = app.add_subcommand("potential", "kernel constants and the exact truncated MGF");
    double p_theta = 0.5, p_a = 1.0, p_eps = 1.0, p_tail = 4.0;
    pot->add_option("--theta", p_theta)->capture_default_str();
    pot->add_option("--a", p_a)->capture_default_str();
    pot->add_option("--epsilon", p_eps)->capture_default_str();
    pot->add_option("--tail-radius", p_tail)->capture_default_str();

    // fk
    auto* fk = app.add_subcommand("fk", "Feynman-Kac cap sweep on a planted or stored field");
    double k_theta = 0.1, k_t = 0.5, k_dt = 1e-3, k_a = 1.0, k_eps = 1.0, k_tail = 3.0,
           k_window = 20.0;
    long long k_paths = 1000;
    int k_planted = 1;
    std::string k_caps = "1e2,1e3,1e4", k_start = "0.75,0,0", k_field_json;
    fk->add_option("--theta", k_theta)->capture_default_str();
    fk->add_option("--t", k_t)->capture_default_str();
    fk->add_option("--dt", k_dt)->capture_default_str();
    fk->add_option("--caps", k_caps, "increasing clamp list")->capture_default_str();
    fk->add_option("--paths", k_paths)->capture_default_str();
    fk->add_option("--planted", k_planted, "points planted at the origin")->capture_default_str();
    fk->add_option("--field-json", k_field_json, "use a stored field instead of planting");
    fk->add_option("--start", k_start, "start point x,y,z")->capture_default_str();
    fk->add_option("--a", k_a)->capture_default_str();
    fk->add_option("--epsilon", k_eps)->capture_default_str();
    fk->add_option("--tail-radius", k_tail)->capture_default_str();
    fk->add_option("--window", k_window, "planted-field window half width")->capture_default_str();

    // eigen
    auto* eig = app.add_subcommand("eigen", "Dirichlet principal eigenvalue");
    double e_R = 1.0, e_zeta = 0.0, e_ball = 0.0;
    int e_grid = 31;
    eig->add_option("--R", e_R)->capture_default_str();
    eig->add_option("--grid-n", e_grid)->capture_default_str();
    eig->add_option("--zeta-const", e_zeta, "constant potential value")->capture_default_str();
    eig->add_option("--ball", e_ball, "restrict to the ball of this radius (0 = full box)")
        ->capture_default_str();

    // hardy
    auto* hardy = app.add_subcommand("hardy", "Hardy ratio sweeps and the H functional");
    std::string h_gm, h_thetas, h_rs = "1", h_deltas;
    int h_grid = 200000, h_hgrid = 20000;
    hardy->add_option("--gm-sweep", h_gm, "list of M values, eN means M=e^N");
    hardy->add_option("--grid-n", h_grid, "geometric nodes for the g_M quadrature")
        ->capture_default_str();
    hardy->add_option("--h-theta", h_thetas, "theta list for the H functional");
    hardy->add_option("--h-r", h_rs, "r list")->capture_default_str();
    hardy->add_option("--h-delta", h_deltas, "delta list");
    hardy->add_option("--h-grid-n", h_hgrid, "1d nodes for the H functional")
        ->capture_default_str();

    // rates
    auto* rates = app.add_subcommand("rates", "branch/rate calculators");
    double r_theta = 0.05, r_kappa = 0.0, r_t = 0.0;
    std::string r_l = "const:1", r_side = "limsup";
    rates->add_option("--theta", r_theta)->capture_default_str();
    rates->add_option("--l", r_l, "const[:v] logpow:a loglogpow:a logxloglogpow:a")
        ->capture_default_str();
    rates->add_option("--side", r_side)->check(CLI::IsMember({"limsup", "liminf"}))
        ->capture_default_str();
    rates->add_option("--kappa", r_kappa, "also report the Anderson index for this kappa");
    rates->add_option("--t", r_t, "also report the predicted normalization at this t");

    // extremes
    auto* ext = app.add_subcommand("extremes", "max-count scaling over dyadic lattices");
    int x_nmin = 2, x_nmax = 6;
    double x_delta = 0.5, x_r = 0.6;
    long long x_reps = 100000;
    ext->add_option("--n-min", x_nmin)->capture_default_str();
    ext->add_option("--n-max", x_nmax)->capture_default_str();
    ext->add_option("--delta", x_delta)->capture_default_str();
    ext->add_option("--r", x_r)->capture_default_str();
    ext->add_option("--replicates", x_reps)->capture_default_str();

    // association
    auto* assoc = app.add_subcommand("association", "joint vs product exceedance check");
    double a_half = 4.0, a_intensity = 1.0, a_overlap = 0.5;
    long long a_threshold = 2, a_reps = 100000;
    assoc->add_option("--half-width", a_half)->capture_default_str();
    assoc->add_option("--intensity", a_intensity)->capture_default_str();
    assoc->add_option("--overlap", a_overlap, "overlap fraction of two unit cubes")
        ->capture_default_str();
    assoc->add_option("--threshold", a_threshold)->capture_default_str();
    assoc->add_option("--replicates", a_reps)->capture_default_str();

    // exit-check
    auto* exitc = app.add_subcommand("exit-check", "Brownian exit lower bound");
    double q_R = 1.0, q_t = 1.0, q_dt = 1e-3;
    long long q_reps = 100000;
    exitc->add_option("--R", q_R)->capture_default_str();
    exitc->add_option("--t", q_t)->capture_default_str();
    exitc->add_option("--dt", q_dt)->capture_default_str();
    exitc->add_option("--replicates", q_reps)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp" ||
            e.get_name() == "CallForVersion") {
            return app.exit(e);
        }
        std::cerr << e.what() << "\n";
        return 1;
    }

    try {
        if (field->parsed()) {
            if (c.out.empty()) throw pan::domain_error("field: --out is required");
            pan::PoissonField f =
                pan::sample_field(pan::Box::centered_cube(f_half), f_intensity, c.seed);
            pan::dump_field_json(f, c.out);
        } else if (pot->parsed()) {
            pan::TruncationScheme scheme{p_a, p_eps, 2.0, p_tail, pan::TailPolicy::drop};
            json cfg{{"theta", p_theta}, {"a", p_a}, {"epsilon", p_eps}, {"tail_radius", p_tail}};
            json j;
            j["mgf_exact"] = pan::truncated_mgf_exact(p_theta, scheme);
            j["compensator_Ca"] = pan::compensator_Ca(p_a);
            j["tail_std"] = pan::tail_std_of(scheme);
            j["kernel_ball_integral"] = pan::kernel_ball_integral(scheme, p_tail);
            emit_json(c, j, cfg);
        } else if (fk->parsed()) {
            pan::FKConfig cfg;
            cfg.theta = k_theta;
            cfg.t = k_t;
            cfg.dt = k_dt;
            cfg.n_paths = k_paths;
            auto start = parse_list(k_start);
            if (start.size() != 3) throw pan::domain_error("fk: --start needs x,y,z");
            cfg.start = {start[0], start[1], start[2]};
            cfg.scheme = {k_a, k_eps, 2.0, k_tail, pan::TailPolicy::drop};
            std::vector<double> caps = parse_list(k_caps);
            cfg.cap = caps.back();
            pan::PoissonField f = k_field_json.empty()
                                      ? pan::planted_field(k_planted, k_window)
                                      : pan::load_field_json(k_field_json);
            std::vector<pan::Estimate> ests = pan::cap_sweep(f, caps, cfg, c.seed);
            json jcfg{{"theta", k_theta}, {"t", k_t},         {"dt", k_dt},
                      {"caps", k_caps},   {"paths", k_paths}, {"planted", k_planted},
                      {"start", k_start}, {"a", k_a},         {"epsilon", k_eps}};
            std::ofstream file;
            std::ostream& os = open_out(c, file);
            os << config_comment(jcfg) << "\n";
            os << "theta,t,dt,cap,n_paths,seed,mean,stderr,flag\n";
            for (std::size_t i = 0; i < ests.size(); ++i) {
                os << pan::fmt17(k_theta) << ',' << pan::fmt17(k_t) << ',' << pan::fmt17(k_dt)
                   << ',' << pan::fmt17(caps[i]) << ',' << k_paths << ',' << c.seed << ','
                   << pan::fmt17(ests[i].mean) << ',' << pan::fmt17(ests[i].stderr_) << ','
                   << (ests[i].diverged ? "diverged" : "ok") << "\n";
            }
        } else if (eig->parsed()) {
            pan::DirichletProblem pb;
            pb.box_half_width = e_R;
            pb.grid_n = e_grid;
            pb.potential.assign(static_cast<std::size_t>(e_grid) * e_grid * e_grid, e_zeta);
            if (e_ball > 0.0) pb.mask = pan::ball_mask(pb, e_ball);
            pan::EigenResult res = pan::principal_eigenvalue(pb);
            json cfg{{"R", e_R}, {"grid_n", e_grid}, {"zeta_const", e_zeta}, {"ball", e_ball}};
            json j{{"lambda", res.lambda},
                   {"iterations", res.iterations},
                   {"norm_check", res.eigenvector_norm_check}};
            emit_json(c, j, cfg);
        } else if (hardy->parsed()) {
            std::ofstream file;
            std::ostream& os = open_out(c, file);
            if (!h_gm.empty()) {
                json jcfg{{"gm_sweep", h_gm}, {"grid_n", h_grid}};
                os << config_comment(jcfg) << "\n";
                os << "log_M,quadrature,closed_form\n";
                for (double log_M : parse_list(h_gm)) {
                    pan::GMRatio r = pan::hardy_ratio_gM(log_M, h_grid);
                    os << pan::fmt17(log_M) << ',' << pan::fmt17(r.quadrature) << ','
                       << pan::fmt17(r.closed_form) << "\n";
                }
            } else if (!h_thetas.empty() && !h_deltas.empty()) {
                json jcfg{{"h_theta", h_thetas}, {"h_r", h_rs}, {"h_delta", h_deltas},
                          {"h_grid_n", h_hgrid}};
                os << config_comment(jcfg) << "\n";
                os << "theta,r,delta,grid_n,H_value\n";
                for (double th : parse_list(h_thetas))
                    for (double rr : parse_list(h_rs))
                        for (double dd : parse_list(h_deltas))
                            os << pan::fmt17(th) << ',' << pan::fmt17(rr) << ',' << pan::fmt17(dd)
                               << ',' << h_hgrid << ','
                               << pan::fmt17(pan::H_functional(th, rr, dd, h_hgrid)) << "\n";
            } else {
                throw pan::domain_error("hardy: need --gm-sweep or --h-theta with --h-delta");
            }
        } else if (rates->parsed()) {
            pan::SlowlyVaryingSpec l = parse_l(r_l);
            pan::Side side = r_side == "limsup" ? pan::Side::limsup : pan::Side::liminf;
            pan::RateVerdict v = pan::rate_verdict(r_theta, l, side);
            json cfg{{"theta", r_theta}, {"l", r_l}, {"side", r_side}};
            json j{{"k", v.k},
                   {"time_exponent", v.time_exponent},
                   {"l_exponent", v.l_exponent},
                   {"branch", branch_name(v.branch)}};
            if (r_kappa > 0.0) {
                j["anderson_index"] = pan::anderson_index(r_theta, r_kappa);
                cfg["kappa"] = r_kappa;
            }
            if (r_t > 0.0) {
                j["predicted_normalization"] = pan::predicted_normalization(r_theta, l, r_t, side);
                cfg["t"] = r_t;
            }
            emit_json(c, j, cfg);
        } else if (ext->parsed()) {
            pan::ExtremeResult res =
                pan::extreme_scaling_experiment(x_nmin, x_nmax, x_delta, x_r, x_reps, c.seed);
            json jcfg{{"n_min", x_nmin}, {"n_max", x_nmax},       {"delta", x_delta},
                      {"r", x_r},        {"replicates", x_reps}};
            std::ofstream file;
            std::ostream& os = open_out(c, file);
            os << config_comment(jcfg) << "\n";
            os << "n,cells,cell_volume,p_emp,p_exact,stderr\n";
            for (const auto& row : res.rows)
                os << row.n << ',' << row.cells << ',' << pan::fmt17(row.cell_volume) << ','
                   << pan::fmt17(row.p_emp) << ',' << pan::fmt17(row.p_exact) << ','
                   << pan::fmt17(row.stderr_) << "\n";
            os << "# slope_exact=" << pan::fmt17(res.slope_exact) << "\n";
        } else if (assoc->parsed()) {
            if (!(a_overlap >= 0.0 && a_overlap < 1.0))
                throw pan::domain_error("association: --overlap must lie in [0,1)");
            pan::Box window = pan::Box::centered_cube(a_half);
            pan::Box c1{{0, 0, 0}, {1, 1, 1}};
            pan::Box c2{{1.0 - a_overlap, 0, 0}, {2.0 - a_overlap, 1, 1}};
            pan::AssociationResult res = pan::check_association(
                window, a_intensity, {c1, c2}, {a_threshold, a_threshold}, pan::Direction::geq,
                a_reps, c.seed);
            json cfg{{"half_width", a_half}, {"intensity", a_intensity}, {"overlap", a_overlap},
                     {"threshold", a_threshold}, {"replicates", a_reps}};
            json j{{"joint_mean", res.joint.mean},
                   {"joint_stderr", res.joint.stderr_},
                   {"product", res.product}};
            emit_json(c, j, cfg);
        } else if (exitc->parsed()) {
            pan::ExitBoundResult res = pan::exit_lower_bound_check(
                q_R, q_t, pan::Box{{0, 0, 0}, {1, 1, 1}}, q_reps, q_dt, c.seed);
            json cfg{{"R", q_R}, {"t", q_t}, {"dt", q_dt}, {"replicates", q_reps}};
            json j{{"lhs_mean", res.lhs.mean},
                   {"lhs_stderr", res.lhs.stderr_},
                   {"rhs_mean", res.rhs.mean},
                   {"rhs_stderr", res.rhs.stderr_}};
            emit_json(c, j, cfg);
        }
    } catch (const pan::numerical_error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 2;
    } catch (const pan::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

int main(int argc, char** argv) { return run(argc, argv); }
