#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "atomion/config.hpp"
#include "atomion/errors.hpp"
#include "atomion/landau_zener.hpp"
#include "atomion/scan.hpp"
#include "atomion/units.hpp"

namespace {

using namespace atomion;

RunConfig load_cfg(const std::string& path, int workers, const std::string& out_dir)
{
    RunConfig cfg = path.empty() ? parse_run_config(Ini{}) : load_run_config(path);
    if (workers > 0) cfg.workers = workers;
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    return cfg;
}

void print_warnings(const PotentialSurfaceSet& surface)
{
    for (const auto& w : surface.warnings()) std::cerr << "warning: " << w << "\n";
}

int cmd_channels(const RunConfig& cfg, int j_max)
{
    const PotentialSurfaceSet surface = PotentialSurfaceSet::build(cfg.surface);
    std::printf("J,parity,asymptote,ja,jb,j,ell,threshold_cm1\n");
    for (int J = 0; J <= j_max; ++J) {
        for (int parity : {+1, -1}) {
            for (const auto& ch : enumerate_case_e(J, parity, surface.thresholds())) {
                std::printf("%d,%d,%s,%s,%s,%s,%d,%.6f\n", J, parity,
                            ch.asym == Asymptote::SD ? (ch.sd52() ? "S+D(5/2)" : "S+D(3/2)")
                                                     : asymptote_name(ch.asym),
                            ch.ja.str().c_str(), ch.jb.str().c_str(), ch.j.str().c_str(), ch.ell,
                            units::cm1_from_hartree(ch.threshold));
            }
        }
    }
    return 0;
}

int cmd_pec_dump(const RunConfig& cfg, const std::string& hunds_case, int J, int parity,
                 double rmin, double rmax, double dr)
{
    const PotentialSurfaceSet surface = PotentialSurfaceSet::build(cfg.surface);
    print_warnings(surface);
    std::vector<double> grid;
    for (double r = rmin; r <= rmax + 0.5 * dr; r += dr) grid.push_back(r);
    using units::cm1_from_hartree;
    if (hunds_case == "a") {
        std::printf("R_bohr");
        for (int s = 1; s <= 16; ++s) std::printf(",V%d_cm1", s);
        std::printf(",G23_cm1\n");
        for (double r : grid) {
            const Eigen::MatrixXd m = surface.bf_matrix(r);
            std::printf("%.6f", r);
            for (int s = 1; s <= 16; ++s) std::printf(",%.8e", cm1_from_hartree(m(s - 1, s - 1)));
            std::printf(",%.8e\n", cm1_from_hartree(surface.x1_gaussian(r)));
        }
        return 0;
    }
    const AdiabatSet ad = hunds_case == "c" ? adiabats_case_c(surface, grid)
                                            : adiabats_case_e(surface, J, parity, grid);
    std::printf("R_bohr");
    for (const auto& lbl : ad.labels) std::printf(",%s_cm1", lbl.c_str());
    std::printf("\n");
    for (std::size_t g = 0; g < grid.size(); ++g) {
        std::printf("%.6f", grid[g]);
        for (Eigen::Index k = 0; k < ad.curves.rows(); ++k)
            std::printf(",%.8e", cm1_from_hartree(ad.curves(k, static_cast<Eigen::Index>(g))));
        std::printf("\n");
    }
    return 0;
}

int cmd_lz(const RunConfig& cfg, bool from_potentials, const std::string& variant_name,
           double w_au, double rc, double df, double uc_cm1, double e_coll_K)
{
    const FclzVariant variant =
        variant_name == "printed" ? FclzVariant::printed : FclzVariant::value_consistent;
    const double mu = cfg.surface.mu;

    double p_t = 0, p_b = 0;
    if (from_potentials) {
        const PotentialSurfaceSet surface = PotentialSurfaceSet::build(cfg.surface);
        print_warnings(surface);
        for (Entrance ent : {Entrance::D52, Entrance::D32}) {
            const FclzFromPotentials f = fclz_from_potentials(surface, ent);
            std::printf("# entrance %s: %zu crossing(s) located\n", entrance_name(ent),
                        f.crossings.size());
            for (std::size_t k = 0; k < f.crossings.size(); ++k) {
                const auto& c = f.crossings[k];
                std::printf("crossing,%s,R_c=%.4f,W_c_cm1=%.3f,dF=%.5e,U_c_cm1=%.2f,P=%.4f\n",
                            entrance_name(ent), c.r_c, units::cm1_from_hartree(c.w_c), c.df,
                            units::cm1_from_hartree(c.u_c), f.probabilities[k]);
            }
            if (ent == Entrance::D52) p_t = f.p_t, p_b = f.p_b;
            const FclzProbabilities net = fclz_network(f.p_t, f.p_b, ent, variant);
            std::printf("network,%s,NRCE=%.5f,FSQ=%.5f,elastic_remainder=%.5f,weight=%.5f\n",
                        entrance_name(ent), net.nrce, net.fsq, net.elastic_remainder,
                        net.entrance_weight);
        }
        return 0;
    }

    LZCrossing c;
    if (w_au > 0 || df > 0) {
        c.r_c = rc;
        c.w_c = w_au;
        c.df = df;
        c.u_c = units::hartree_from_cm1(uc_cm1);
    } else {
        c = x1_reference_crossing(mu);
        std::printf("# reference outer-crossing linearization (dF inverted from P=0.769)\n");
    }
    const double e = units::hartree_from_kelvin(e_coll_K);
    const double p = lz_probability(c, e, mu);
    std::printf("single_path,P=%.6f\n", p);
    std::printf("double_path,P=%.6f\n", double_path(p));
    for (Entrance ent : {Entrance::D52, Entrance::D32}) {
        const FclzProbabilities net = fclz_network(p, p, ent, variant);
        std::printf("network,%s,NRCE=%.5f,FSQ=%.5f,elastic_remainder=%.5f,weight=%.5f\n",
                    entrance_name(ent), net.nrce, net.fsq, net.elastic_remainder,
                    net.entrance_weight);
    }
    return 0;
}

int cmd_xsec_scan(const RunConfig& cfg, bool resume)
{
    const PotentialSurfaceSet surface = PotentialSurfaceSet::build(cfg.surface);
    print_warnings(surface);
    const ScanSummary s = run_scan(cfg, surface, resume, std::cout);
    std::printf("# blocks planned=%d computed=%d reused=%d failed=%d\n", s.planned, s.computed,
                s.reused, s.failed);
    for (const auto& f : s.failures) std::fprintf(stderr, "failed block: %s\n", f.c_str());
    std::printf("# wrote %s/smatrix.arc and %s/xsec.csv\n", cfg.out_dir.c_str(),
                cfg.out_dir.c_str());
    if (s.failed > 0) return 4;
    return 0;
}

int cmd_thermal_rates(const RunConfig& cfg)
{
    const ScanData data = load_scan_data(cfg, cfg.out_dir);
    write_rates_csv(data, cfg.out_dir + "/rates.csv");
    std::printf("# wrote %s/rates.csv\n", cfg.out_dir.c_str());
    const double kl = langevin_rate_thermal(cfg.surface.c4, cfg.surface.mu, 0.0);
    std::printf("# K_L(thermal) = %.4e cm3/s\n", kl);
    return 0;
}

int cmd_resonance_find(const RunConfig& cfg)
{
    const ScanData data = load_scan_data(cfg, cfg.out_dir);
    const auto recs = find_resonances(data);
    write_resonances_csv(data, recs, cfg.out_dir + "/resonances.csv");
    std::printf("# %zu resonance(s); wrote %s/resonances.csv\n", recs.size(), cfg.out_dir.c_str());
    return 0;
}

int cmd_plot_data(const RunConfig& cfg, const std::string& style, int J, int parity)
{
    const PotentialSurfaceSet surface = PotentialSurfaceSet::build(cfg.surface);
    emit_plotdata(cfg, surface, parse_plot_style(style), cfg.out_dir, J, parity);
    std::printf("# wrote %s/plot/\n", cfg.out_dir.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"coupled-channel scattering engine for cold atom-ion collisions"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    int workers = 0;
    bool resume = false;
    app.add_option("--config", config_path, "run configuration file");
    app.add_option("--workers", workers, "worker threads for sweeps");
    app.add_option("--out", out_dir, "output directory");
    app.add_flag("--resume", resume, "reuse completed blocks from an existing archive");

    auto* channels = app.add_subcommand("channels", "print the (J,parity) channel table as CSV");
    int j_max = 12;
    channels->add_option("--jmax", j_max, "highest J to list");

    auto* pec = app.add_subcommand("pec-dump", "dump potential curves / adiabats as CSV");
    std::string hunds_case = "a";
    int J = 0, parity = +1;
    double rmin = 4.0, rmax = 60.0, dr = 0.05;
    pec->add_option("--hunds-case", hunds_case, "a, c or e")
        ->check(CLI::IsMember({"a", "c", "e"}));
    pec->add_option("--J", J, "total angular momentum (case e)");
    pec->add_option("--parity", parity, "+1 or -1 (case e)")->check(CLI::IsMember({1, -1}));
    pec->add_option("--rmin", rmin);
    pec->add_option("--rmax", rmax);
    pec->add_option("--dr", dr);

    auto* lz = app.add_subcommand("lz", "semiclassical crossing probabilities");
    bool from_potentials = false;
    std::string variant = "value-consistent";
    double lz_w = 0, lz_rc = 11.06, lz_df = 0, lz_uc = -3450.0, lz_e = 0.0;
    lz->add_flag("--from-potentials", from_potentials, "linearize the model surface crossings");
    lz->add_option("--formula", variant, "printed | value-consistent")
        ->check(CLI::IsMember({"printed", "value-consistent"}));
    lz->add_option("--w-au", lz_w, "half-gap W_c in hartree");
    lz->add_option("--rc", lz_rc, "crossing radius a0");
    lz->add_option("--df", lz_df, "slope difference Eh/a0");
    lz->add_option("--uc-cm1", lz_uc, "crossing energy relative to entrance, cm^-1");
    lz->add_option("--energy-K", lz_e, "collision energy in K");

    auto* scan = app.add_subcommand("xsec-scan", "run the (energy,J,parity) sweep");
    auto* rates = app.add_subcommand("thermal-rates", "thermalized rates from a completed scan");
    auto* reso = app.add_subcommand("resonance-find", "locate shape resonances in a scan");

    auto* plot = app.add_subcommand("plot-data", "emit figure-style CSV bundles");
    std::string style = "xsec";
    plot->add_option("--style", style, "xsec | rates | pecs | adiabats")
        ->check(CLI::IsMember({"xsec", "rates", "pecs", "adiabats"}));
    plot->add_option("--J", J, "total angular momentum (adiabats)");
    plot->add_option("--parity", parity, "+1 or -1 (adiabats)")->check(CLI::IsMember({1, -1}));

    CLI11_PARSE(app, argc, argv);

    try {
        const atomion::RunConfig cfg = load_cfg(config_path, workers, out_dir);
        if (channels->parsed()) return cmd_channels(cfg, j_max);
        if (pec->parsed()) return cmd_pec_dump(cfg, hunds_case, J, parity, rmin, rmax, dr);
        if (lz->parsed()) return cmd_lz(cfg, from_potentials, variant, lz_w, lz_rc, lz_df, lz_uc, lz_e);
        if (scan->parsed()) return cmd_xsec_scan(cfg, resume);
        if (rates->parsed()) return cmd_thermal_rates(cfg);
        if (reso->parsed()) return cmd_resonance_find(cfg);
        if (plot->parsed()) return cmd_plot_data(cfg, style, J, parity);
    } catch (const atomion::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const atomion::PhysicsError& e) {
        std::fprintf(stderr, "physics error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 0;
}
