// flagrecon: decides whether a flag function is the projection curvature
// radius function of a centrally symmetric convex body, and reconstructs the
// body (generating density, support function, boundary mesh) when it is.
//
// Subcommands: synth, validate, forward, reconstruct, roundtrip.
// Exit codes: 0 success, 1 validation failure, 2 not a body, 3 input format
// error, 4 internal error.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "flagrecon/flagrecon.hpp"

namespace fs = std::filesystem;
using namespace flagrecon;

namespace {

constexpr int kExitValidationFailure = 1;
constexpr int kExitNotABody = 2;
constexpr int kExitFormatError = 3;
constexpr int kExitInternalError = 4;

struct SynthOptions {
    std::string kind;
    double radius = 1.0;
    int lmax = 4;
    std::uint64_t seed = 1;
    double margin = 0.1;
    int n_lat = kDefaultNLat;
    int n_lon = kDefaultNLon;
    std::string out_flags;
    std::string out_density;
};

struct ValidateOptions {
    std::string flag_file;
    int samples = 200;
    double tol = 5e-3;
    int lmax = kDefaultLmax;
    std::uint64_t seed = 12345;
    std::string report;
};

struct ForwardOptions {
    std::string density_file;
    std::string out;
    int n_lat = kDefaultNLat;
    int n_lon = kDefaultNLon;
};

struct ReconstructOptions {
    std::string flag_file;
    std::string out_dir;
    int lmax = kDefaultLmax;
    int n_lat = 0;  // 0: inherit from the flag file grid
    int n_lon = 0;
    int subdiv = 3;
};

struct RoundtripOptions {
    std::string density_file;
    int lmax = kDefaultLmax;
    int n_lat = kDefaultNLat;
    int n_lon = kDefaultNLon;
    int samples = 200;
    std::uint64_t seed = 12345;
    std::string report;
};

json density_json(const GeneratingDensity& density) {
    json j = scalar_field_to_json(density.field);
    j["lindquist_margin"] = density.lindquist_margin;
    j["body_valid"] = density.body_valid();
    j["n_lat"] = density.grid.n_lat();
    j["n_lon"] = density.grid.n_lon();
    return j;
}

int run_synth(const SynthOptions& opt) {
    const SphereGrid grid(opt.n_lat, opt.n_lon);
    if (opt.out_flags.empty() && opt.out_density.empty())
        throw FormatError("synth: nothing to do; pass --out-flags and/or --out-density");

    if (opt.kind == "sphere") {
        const SphereTruth truth = make_sphere(opt.radius, grid);
        if (!opt.out_density.empty())
            write_json_file(opt.out_density, density_json(truth.density));
        if (!opt.out_flags.empty())
            write_json_file(opt.out_flags, flag_field_to_json(truth.flags));
        std::cout << json{{"kind", "sphere"},
                          {"radius", opt.radius},
                          {"support_value", truth.support_value},
                          {"lindquist_margin", truth.density.lindquist_margin}}
                         .dump(2)
                  << "\n";
        return 0;
    }
    if (opt.kind == "harmonic") {
        const GeneratingDensity density = make_harmonic(opt.lmax, opt.seed, opt.margin, grid);
        if (!opt.out_density.empty()) {
            json j = density_json(density);
            j["seed"] = opt.seed;
            j["margin_target"] = opt.margin;
            write_json_file(opt.out_density, j);
        }
        if (!opt.out_flags.empty())
            write_json_file(opt.out_flags, flag_field_to_json(forward_field(density)));
        std::cout << json{{"kind", "harmonic"},
                          {"seed", opt.seed},
                          {"lindquist_margin", density.lindquist_margin},
                          {"body_valid", density.body_valid()}}
                         .dump(2)
                  << "\n";
        return 0;
    }
    throw FormatError("synth: unknown kind \"" + opt.kind + "\" (sphere or harmonic)");
}

int run_validate(const ValidateOptions& opt) {
    const FlagField field = flag_field_from_json(load_json_file(opt.flag_file));
    const ConsistencyReport rep = consistency_residual(field, opt.samples, opt.seed, opt.lmax);
    json j = consistency_report_to_json(rep);
    j["tol"] = opt.tol;
    j["pass"] = rep.max_residual < opt.tol;
    const FlagSymmetryReport sym = validate_symmetry(field);
    j["symmetry_deviation"] = sym.max_deviation;
    std::cout << j.dump(2) << "\n";
    if (!opt.report.empty()) write_json_file(opt.report, j);
    return rep.max_residual < opt.tol ? 0 : kExitValidationFailure;
}

int run_forward(const ForwardOptions& opt) {
    const ScalarField h = scalar_field_from_json(load_json_file(opt.density_file));
    const SphereGrid grid(opt.n_lat, opt.n_lon);
    const GeneratingDensity density = make_density(h, grid);
    write_json_file(opt.out, flag_field_to_json(forward_field(density)));
    std::cout << json{{"lindquist_margin", density.lindquist_margin},
                      {"body_valid", density.body_valid()},
                      {"n_lat", grid.n_lat()},
                      {"n_lon", grid.n_lon()}}
                     .dump(2)
              << "\n";
    return 0;
}

int run_reconstruct(const ReconstructOptions& opt) {
    const FlagField field = flag_field_from_json(load_json_file(opt.flag_file));
    const int n_lat = opt.n_lat > 0 ? opt.n_lat : field.grid().n_lat();
    const int n_lon = opt.n_lon > 0 ? opt.n_lon : field.grid().n_lon();
    const SphereGrid grid(n_lat, n_lon);

    const FlagSymmetryReport sym = validate_symmetry(field);
    const ScalarField fbar = mean_over_psi(field, opt.lmax);
    const GeneratingDensity density = blaschke_density(fbar, grid);

    fs::create_directories(opt.out_dir);
    const fs::path dir(opt.out_dir);
    write_json_file(dir / "density.json", density_json(density));

    json report{{"lindquist_margin", density.lindquist_margin},
                {"body_valid", density.body_valid()},
                {"symmetry_deviation", sym.max_deviation},
                {"n_lat", n_lat},
                {"n_lon", n_lon},
                {"lmax", opt.lmax},
                {"subdiv", opt.subdiv},
                {"frame_convention", frame_convention_name()}};

    if (!density.body_valid()) {
        report["mesh"] = nullptr;
        write_json_file(dir / "report.json", report);
        std::cout << report.dump(2) << "\n";
        std::cerr << "reconstruct: density fails the Lindquist condition (margin "
                  << density.lindquist_margin << "); no mesh written\n";
        return kExitNotABody;
    }

    const SupportEvaluator support(density);
    const BodyMesh mesh = export_mesh(support, opt.subdiv);
    atomic_write_file(dir / "body.obj", mesh_to_obj(mesh));

    const ConvexityReport conv = convexity_audit(mesh);
    const MeshSymmetryReport msym = symmetry_audit(mesh);
    report["mesh"] = json{{"path", "body.obj"},
                          {"vertices", mesh.vertices.size()},
                          {"faces", mesh.faces.size()},
                          {"volume", mesh_volume(mesh)},
                          {"convexity_violation", conv.worst_violation},
                          {"convexity_tol", conv.tol},
                          {"convexity_pass", conv.pass},
                          {"symmetry_pair_error", msym.max_pair_error},
                          {"symmetry_pass", msym.pass}};
    write_json_file(dir / "report.json", report);
    std::cout << report.dump(2) << "\n";
    return 0;
}

int run_roundtrip(const RoundtripOptions& opt) {
    const ScalarField h = scalar_field_from_json(load_json_file(opt.density_file));
    const SphereGrid grid(opt.n_lat, opt.n_lon);
    const GeneratingDensity source = make_density(h, grid);

    const FlagField forward = forward_field(source);
    const ConsistencyReport consistency =
        consistency_residual(forward, opt.samples, opt.seed, opt.lmax);

    const ScalarField fbar = mean_over_psi(forward, opt.lmax);
    const GeneratingDensity recovered = blaschke_density(fbar, grid);

    double density_err = 0.0;
    for (std::size_t i = 0; i < grid.node_count(); ++i)
        density_err = std::max(density_err,
                               std::abs(recovered.field.evaluate(grid.direction(i)) -
                                        source.field.evaluate(grid.direction(i))));

    const FlagField forward_back = forward_field(recovered);
    double coeff_err = 0.0;
    for (std::size_t i = 0; i < grid.node_count(); ++i) {
        const FlagCoeffs& a = forward.node(i);
        const FlagCoeffs& b = forward_back.node(i);
        coeff_err = std::max({coeff_err, std::abs(a.a0 - b.a0), std::abs(a.a2 - b.a2),
                              std::abs(a.b2 - b.b2)});
    }

    json j{{"consistency_max_residual", consistency.max_residual},
           {"residual_by_harmonic",
            json{{"h0", consistency.h0}, {"h2", consistency.h2}, {"other", consistency.other}}},
           {"density_sup_norm", source.sup_norm},
           {"density_error_linf", density_err},
           {"density_error_rel", source.sup_norm > 0 ? density_err / source.sup_norm : 0.0},
           {"flag_coeff_max_error", coeff_err},
           {"lindquist_margin_source", source.lindquist_margin},
           {"lindquist_margin_recovered", recovered.lindquist_margin},
           {"samples", opt.samples},
           {"n_lat", opt.n_lat},
           {"n_lon", opt.n_lon},
           {"lmax", opt.lmax},
           {"seed", opt.seed},
           {"frame_convention", frame_convention_name()}};
    std::cout << j.dump(2) << "\n";
    if (!opt.report.empty()) write_json_file(opt.report, j);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Flag-function validation and convex body reconstruction"};
    app.require_subcommand(1);

    SynthOptions synth;
    CLI::App* synth_cmd = app.add_subcommand("synth", "Write synthetic densities and flag fields");
    synth_cmd->add_option("--kind", synth.kind, "sphere or harmonic")->required();
    synth_cmd->add_option("--radius", synth.radius, "sphere radius");
    synth_cmd->add_option("--lmax", synth.lmax, "harmonic band limit");
    synth_cmd->add_option("--seed", synth.seed, "harmonic seed");
    synth_cmd->add_option("--margin", synth.margin, "harmonic Lindquist margin target");
    synth_cmd->add_option("--n-lat", synth.n_lat, "latitude rings");
    synth_cmd->add_option("--n-lon", synth.n_lon, "longitudes (even)");
    synth_cmd->add_option("--out-flags", synth.out_flags, "flag field output path");
    synth_cmd->add_option("--out-density", synth.out_density, "density output path");

    ValidateOptions validate;
    CLI::App* validate_cmd =
        app.add_subcommand("validate", "Check the consistency identity on a flag field");
    validate_cmd->add_option("flag_file", validate.flag_file)->required();
    validate_cmd->add_option("--samples", validate.samples, "random flags to sample");
    validate_cmd->add_option("--tol", validate.tol, "max residual for exit code 0");
    validate_cmd->add_option("--lmax", validate.lmax, "band limit of the tangent mean");
    validate_cmd->add_option("--seed", validate.seed, "flag sampling seed");
    validate_cmd->add_option("--report", validate.report, "report output path");

    ForwardOptions forward;
    CLI::App* forward_cmd =
        app.add_subcommand("forward", "Flag field of projection curvature radii of a density");
    forward_cmd->add_option("density_file", forward.density_file)->required();
    forward_cmd->add_option("--out", forward.out, "flag field output path")->required();
    forward_cmd->add_option("--n-lat", forward.n_lat, "latitude rings");
    forward_cmd->add_option("--n-lon", forward.n_lon, "longitudes (even)");

    ReconstructOptions reconstruct;
    CLI::App* reconstruct_cmd =
        app.add_subcommand("reconstruct", "Recover density, support function and boundary mesh");
    reconstruct_cmd->add_option("flag_file", reconstruct.flag_file)->required();
    reconstruct_cmd->add_option("--out-dir", reconstruct.out_dir, "output directory")->required();
    reconstruct_cmd->add_option("--lmax", reconstruct.lmax, "band limit of the tangent mean");
    reconstruct_cmd->add_option("--n-lat", reconstruct.n_lat, "transform latitude rings");
    reconstruct_cmd->add_option("--n-lon", reconstruct.n_lon, "transform longitudes");
    reconstruct_cmd->add_option("--subdiv", reconstruct.subdiv, "icosphere subdivision level");

    RoundtripOptions roundtrip;
    CLI::App* roundtrip_cmd =
        app.add_subcommand("roundtrip", "Forward map, validation and recovery of a density");
    roundtrip_cmd->add_option("density_file", roundtrip.density_file)->required();
    roundtrip_cmd->add_option("--lmax", roundtrip.lmax, "band limit");
    roundtrip_cmd->add_option("--n-lat", roundtrip.n_lat, "latitude rings");
    roundtrip_cmd->add_option("--n-lon", roundtrip.n_lon, "longitudes (even)");
    roundtrip_cmd->add_option("--samples", roundtrip.samples, "random flags to sample");
    roundtrip_cmd->add_option("--seed", roundtrip.seed, "flag sampling seed");
    roundtrip_cmd->add_option("--report", roundtrip.report, "report output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitFormatError;
    }

    try {
        if (synth_cmd->parsed()) return run_synth(synth);
        if (validate_cmd->parsed()) return run_validate(validate);
        if (forward_cmd->parsed()) return run_forward(forward);
        if (reconstruct_cmd->parsed()) return run_reconstruct(reconstruct);
        if (roundtrip_cmd->parsed()) return run_roundtrip(roundtrip);
        std::cerr << "no subcommand selected\n";
        return kExitFormatError;
    } catch (const FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFormatError;
    } catch (const NotABody& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNotABody;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInternalError;
    }
}
