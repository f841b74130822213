#include "hopfflow/runner.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>

#include "hopfflow/curve_family.hpp"
#include "hopfflow/io.hpp"
#include "hopfflow/run_config.hpp"

namespace hopfflow {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

json finding_to_json(const BoundFinding& f) {
    return {{"name", f.name}, {"pass", f.pass},     {"lhs", f.lhs},
            {"rhs", f.rhs},   {"margin", f.margin}, {"note", f.note}};
}

json residuals_to_json(const std::vector<IdentityResidual>& rs) {
    json arr = json::array();
    for (const auto& r : rs)
        arr.push_back({{"name", r.name}, {"residual", r.residual}, {"scale", r.lhs_scale}});
    return arr;
}

}  // namespace

int cmd_flow_run(const std::string& config_path, std::ostream& out, std::ostream& err) {
    RunConfig config;
    try {
        config = parse_run_config(config_path);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return 2;
    }

    fs::create_directories(config.output_dir);
    const std::string csv_path = config.output_dir + "/trajectory.csv";
    const std::string summary_path = config.output_dir + "/summary.json";

    DiscreteCurve initial;
    try {
        initial = build_initial_curve(config);
    } catch (const Error& e) {
        err << "curve construction failed: " << e.what() << '\n';
        return 2;
    }

    json summary;
    summary["config"] = config_path;
    summary["family"] = config.family;

    Trajectory traj;
    try {
        traj = run(initial, config.flow);
    } catch (const RegimeViolation& e) {
        err << "regime violation: " << e.what() << '\n';
        return 3;
    }

    {
        std::ofstream csv(csv_path);
        TrajectoryCsv writer(csv, config.verify_moduli);
        int snap_index = 0;
        for (std::size_t k = 0; k < traj.samples.size(); ++k) {
            const FlowState& s = traj.samples[k];
            ModulusPoint mod;
            const ModulusPoint* mod_ptr = nullptr;
            if (config.verify_moduli && s.report.embedded.value_or(false)) {
                mod = modulus(s.report);
                mod_ptr = &mod;
            }
            writer.write_row(s, mod_ptr);
            if (config.snapshot_every > 0 && k % config.snapshot_every == 0) {
                write_snapshot_file(config.output_dir + "/snapshot_" +
                                        std::to_string(snap_index++) + ".txt",
                                    s.curve, s.t);
            }
        }
    }

    const FlowState& last = traj.samples.back();
    write_snapshot_file(config.output_dir + "/final.txt", last.curve, last.t);

    summary["termination"] = to_string(traj.reason);
    summary["steps"] = traj.steps;
    summary["t_final"] = last.t;
    summary["final_energy"] = last.report.energy;
    summary["final_sup_kappa"] = last.report.sup_kappa;
    summary["final_length"] = last.report.length;
    summary["final_area"] = last.report.area;
    summary["area_nominal"] = last.report.area_nominal();
    if (!traj.message.empty()) summary["message"] = traj.message;

    if (config.verify_moduli && last.report.embedded.value_or(false)) {
        const ModulusPoint mod = modulus(last.report);
        summary["tau_reduced"] = {mod.tau_reduced.real(), mod.tau_reduced.imag()};
        summary["tau_word"] = mod.word;
    }

    if (config.verify_hopf && last.report.embedded.value_or(false)) {
        const CurveGeometry geom = geometry(last.curve, config.flow.deriv);
        const HorizontalLift lift =
            horizontal_lift(last.curve, fiber_point(last.curve.nodes[0]),
                            config.flow.deriv);
        HopfTorusMesh mesh = build_torus(lift, config.fiber_res);
        surface_geometry(mesh);
        summary["hopf_identities"] = residuals_to_json(verify_hopf_identities(mesh, geom));
        summary["flow_correspondence"] =
            residuals_to_json(verify_flow_correspondence(mesh, geom));
        summary["holonomy"] = lift.holonomy;
        export_mesh_file(config.output_dir + "/final_mesh.txt", mesh);
    }

    if (config.verify_evolution && traj.samples.size() >= 3) {
        try {
            const auto res = curvature_evolution_residual(traj);
            double max_kappa = 0.0, max_dmu = 0.0;
            for (const auto& r : res) {
                max_kappa = std::max(max_kappa, r.kappa_max_rel);
                max_dmu = std::max(max_dmu, r.dmu_max_rel);
            }
            summary["evolution_residual_kappa"] = max_kappa;
            summary["evolution_residual_dmu"] = max_dmu;
        } catch (const ResampledBetweenSamples&) {
            summary["evolution_residual"] = "skipped: resampling between samples";
        }
    }

    {
        std::ofstream sj(summary_path);
        sj << std::setw(2) << summary << '\n';
    }
    out << "termination: " << to_string(traj.reason) << "  steps: " << traj.steps
        << "  E: " << format_double(last.report.energy)
        << "  sup|kappa|: " << format_double(last.report.sup_kappa) << '\n';
    out << "wrote " << csv_path << ", " << summary_path << '\n';
    return traj.reason == StopReason::StepFailed ? 4 : 0;
}

int cmd_curve_info(const std::string& snapshot_path, const std::string& json_out,
                   std::ostream& out, std::ostream& err) {
    Snapshot snap;
    try {
        snap = read_snapshot_file(snapshot_path);
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return 2;
    }

    const CurveGeometry geom = geometry(snap.curve);
    const EnergyReport report = analyze(snap.curve, geom);
    const double extrinsic = extrinsic_energy(geom);
    const auto findings = check_bounds(report, report.energy);

    out << "nodes: " << snap.curve.size() << "  t: " << format_double(snap.t) << '\n';
    out << "elastic energy:   " << format_double(report.energy) << '\n';
    out << "extrinsic energy: " << format_double(extrinsic) << '\n';
    out << "length:           " << format_double(report.length) << '\n';
    out << "area:             " << format_double(report.area)
        << (report.area_nominal() ? "  (nominal: curve not embedded)" : "") << '\n';
    out << "sup |kappa|:      " << format_double(report.sup_kappa) << '\n';
    out << "gradient L2:      " << format_double(report.grad_l2) << '\n';
    for (const auto& f : findings)
        out << (f.pass ? "  pass  " : "  FAIL  ") << f.name << "  margin "
            << format_double(f.margin) << '\n';

    json j;
    j["energy"] = report.energy;
    j["extrinsic_energy"] = extrinsic;
    j["length"] = report.length;
    j["area"] = report.area;
    j["area_nominal"] = report.area_nominal();
    j["sup_kappa"] = report.sup_kappa;
    j["grad_l2"] = report.grad_l2;
    j["embedded"] = report.embedded.value_or(false);
    json jf = json::array();
    for (const auto& f : findings) jf.push_back(finding_to_json(f));
    j["bounds"] = jf;

    if (report.embedded.value_or(false)) {
        const ModulusPoint mod = modulus(report);
        out << "tau:              " << format_double(mod.tau.real()) << " + "
            << format_double(mod.tau.imag()) << " i\n";
        out << "tau reduced:      " << format_double(mod.tau_reduced.real()) << " + "
            << format_double(mod.tau_reduced.imag()) << " i  (word "
            << (mod.word.empty() ? "-" : mod.word) << ")\n";
        j["tau"] = {mod.tau.real(), mod.tau.imag()};
        j["tau_reduced"] = {mod.tau_reduced.real(), mod.tau_reduced.imag()};
        j["tau_word"] = mod.word;
    }

    if (!json_out.empty()) {
        std::ofstream js(json_out);
        js << std::setw(2) << j << '\n';
    }
    return 0;
}

int cmd_torus_check(const std::string& snapshot_path, int fiber_res,
                    const std::string& report_out, std::ostream& out, std::ostream& err) {
    Snapshot snap;
    try {
        snap = read_snapshot_file(snapshot_path);
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return 2;
    }
    if (!is_embedded(snap.curve)) {
        err << "torus-check requires an embedded curve\n";
        return 3;
    }

    const CurveGeometry geom = geometry(snap.curve);
    const EnergyReport report = analyze(snap.curve, geom);
    const HorizontalLift lift =
        horizontal_lift(snap.curve, fiber_point(snap.curve.nodes[0]));
    HopfTorusMesh mesh = build_torus(lift, fiber_res);
    surface_geometry(mesh);

    const auto identities = verify_hopf_identities(mesh, geom);
    const auto correspondence = verify_flow_correspondence(mesh, geom);

    const double half_area = 0.5 * report.area;
    auto wrap = [](double a) {
        const double two_pi = 6.283185307179586;
        a = std::fmod(a, two_pi);
        if (a < 0) a += two_pi;
        return a;
    };
    double hol_diff = std::abs(wrap(lift.holonomy) - wrap(half_area));
    hol_diff = std::min(hol_diff, 6.283185307179586 - hol_diff);

    std::ostringstream table;
    table << "identity,residual,scale\n";
    for (const auto& r : identities)
        table << r.name << ',' << format_double(r.residual) << ',' << format_double(r.lhs_scale)
              << '\n';
    for (const auto& r : correspondence)
        table << r.name << ',' << format_double(r.residual) << ',' << format_double(r.lhs_scale)
              << '\n';
    table << "holonomy_vs_half_area," << format_double(hol_diff) << ','
          << format_double(lift.holonomy) << '\n';
    table << "lift_fiber_residual," << format_double(lift.fiber_residual) << ",1\n";
    table << "lift_horizontality," << format_double(lift.horizontality_residual) << ",1\n";
    table << "willmore_energy_value," << format_double(mesh.willmore) << ','
          << format_double(report.energy) << '\n';

    out << table.str();
    if (!report_out.empty()) {
        std::ofstream f(report_out);
        f << table.str();
        out << "wrote " << report_out << '\n';
    }
    return 0;
}

}  // namespace hopfflow
