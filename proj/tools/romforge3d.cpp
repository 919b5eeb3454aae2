#include "CLI11.hpp"

#include "romforge/accept/acceptance.hpp"
#include "romforge/cases.hpp"
#include "romforge/fe/assembly.hpp"
#include "romforge/fe/mesh_io.hpp"
#include "romforge/modal/modal.hpp"
#include "romforge/mstep/mstep.hpp"
#include "romforge/reduce/condense.hpp"
#include "romforge/reduce/nnm.hpp"
#include "romforge/reduce/smd.hpp"
#include "romforge/rom/continuation.hpp"
#include "romforge/rom/hbm.hpp"
#include "romforge/step/step.hpp"
#include "romforge/util/hash.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using json = nlohmann::json;
using romforge::Index;
using romforge::Real;
using romforge::VecX;
namespace rf = romforge;

namespace {

std::string fnum(Real v) {
    char b[48];
    std::snprintf(b, sizeof b, "%.10e", v);
    return b;
}

std::string pnum(Real v) {
    char b[48];
    std::snprintf(b, sizeof b, "%.17g", v);
    return b;
}

void write_text(const fs::path& path, const std::string& text) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << text;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ============================================================================
// Model: the structure every stage operates on, with lazily computed and
// cached spectra so chained stages share the heavy work.
// ============================================================================
struct ModelOptions {
    std::string source; ///< case name or mesh JSON path
    Index nx = -1, ny = -1, nz = -1; ///< beam divisions (-1: preset default)
    Index ns = -1, nr = -1, ntz = -1; ///< plate divisions
    Real nu = 0.3;
    Real E = 210e9, rho = 7800.0;
    Real thickness = 0; ///< for mesh files; 0 derives the smallest box extent
};

struct ModelState {
    rf::cases::Preset preset;
    std::string seed; ///< canonical description feeding the manifest hash
    std::unique_ptr<rf::fe::Assembler> asmb;
    rf::step::ForceEval force;
    rf::modal::ModeSet modes;
    std::vector<rf::modal::ModeInfo> labels;
    Index modes_request = 0; ///< 0: none yet; -1: full spectrum
    std::string midset;
    std::map<Index, rf::step::CouplingCoefficients> singles;

    explicit ModelState(const ModelOptions& mo) {
        if (mo.source.size() > 5 && mo.source.substr(mo.source.size() - 5) == ".json") {
            const std::string text = read_file(mo.source);
            preset.name = fs::path(mo.source).stem().string();
            preset.mesh = rf::fe::mesh_from_json(text);
            preset.material = rf::fe::Material{mo.E, mo.nu, mo.rho};
            preset.thickness = mo.thickness;
            if (preset.thickness <= 0) {
                rf::Vec3 lo = preset.mesh.nodes.front(), hi = lo;
                for (const auto& x : preset.mesh.nodes) {
                    lo = lo.cwiseMin(x);
                    hi = hi.cwiseMax(x);
                }
                preset.thickness = (hi - lo).minCoeff();
            }
            seed = "mesh=" + rf::util::hash_hex((text)) + ";E=" + pnum(mo.E) +
                   ";nu=" + pnum(mo.nu) + ";rho=" + pnum(mo.rho) + ";thickness=" + pnum(preset.thickness);
        } else if (mo.source == "thin_beam") {
            const Index nx = mo.nx > 0 ? mo.nx : 40;
            preset = rf::cases::thin_beam(nx, mo.nu);
            seed = "case=thin_beam;nx=" + std::to_string(nx) + ";nu=" + pnum(mo.nu);
        } else if (mo.source == "thick_beam") {
            const Index nx = mo.nx > 0 ? mo.nx : 15, ny = mo.ny > 0 ? mo.ny : 2, nz = mo.nz > 0 ? mo.nz : 2;
            preset = rf::cases::thick_beam(nx, ny, nz, mo.nu);
            seed = "case=thick_beam;nx=" + std::to_string(nx) + ";ny=" + std::to_string(ny) +
                   ";nz=" + std::to_string(nz) + ";nu=" + pnum(mo.nu);
        } else if (mo.source == "circular_plate" || mo.source == "circular_plate_small") {
            const bool small = mo.source == "circular_plate_small";
            const Index ns = mo.ns > 0 ? mo.ns : (small ? 4 : 10);
            const Index nr = mo.nr > 0 ? mo.nr : (small ? 3 : 11);
            const Index ntz = mo.ntz > 0 ? mo.ntz : 2;
            preset = rf::cases::circular_plate(ns, nr, ntz);
            preset.name = mo.source;
            seed = "case=" + mo.source + ";ns=" + std::to_string(ns) + ";nr=" + std::to_string(nr) +
                   ";ntz=" + std::to_string(ntz);
        } else {
            throw std::invalid_argument("unknown case or mesh file: " + mo.source +
                                        " (cases: thin_beam thick_beam circular_plate circular_plate_small)");
        }
        asmb = std::make_unique<rf::fe::Assembler>(preset.mesh, preset.material);
        force = rf::step::make_force_eval(*asmb);
        // Mode classification needs a node set that actually carries nodes;
        // on very coarse sections the geometric midline has none, so fall
        // back to the nearest populated surface line.
        midset = "midline";
        for (const char* name : {"midsurface", "midline", "upper_line", "upper_lateral_line"}) {
            const auto it = preset.mesh.node_sets.find(name);
            if (it != preset.mesh.node_sets.end() && !it->second.empty()) {
                midset = name;
                break;
            }
        }
    }

    std::string manifest(const std::string& stage_params) const {
        return rf::util::hash_hex((seed + "|" + stage_params));
    }

    // count = -1 requests the full spectrum; spectra only grow.
    void ensure_modes(Index count) {
        const bool have_enough =
            modes_request == -1 || (modes_request != 0 && count != -1 && count <= modes_request);
        if (have_enough) return;
        rf::modal::ModalOptions mo;
        mo.count = count;
        modes = rf::modal::solve_modes(*asmb, mo);
        labels = rf::modal::classify_modes(*asmb, modes, midset, 2);
        modes_request = count;
        singles.clear();
    }

    const rf::step::CouplingCoefficients& single(Index p) {
        auto it = singles.find(p);
        if (it == singles.end()) {
            const Real lam = rf::step::step_lambda(modes.phi.col(p), preset.thickness, 0.05);
            it = singles.emplace(p, rf::step::step_single(force, modes, p, lam)).first;
        }
        return it->second;
    }
};

Index to_zero_based(Index one_based, Index count, const char* what) {
    if (one_based < 1 || one_based > count)
        throw std::invalid_argument(std::string(what) + " " + std::to_string(one_based) + " outside 1.." +
                                    std::to_string(count));
    return one_based - 1;
}

// ============================================================================
// Stages
// ============================================================================
void stage_mesh(ModelState& m, const fs::path& out) {
    json j = json::parse(rf::fe::mesh_to_json(m.preset.mesh));
    j["manifest"] = m.manifest("mesh");
    write_text(out / "mesh.json", j.dump(1) + "\n");
    std::cout << "mesh: " << m.preset.mesh.nodes.size() << " nodes, " << m.preset.mesh.elements.size()
              << " elements, " << m.asmb->n_free() << " free dofs -> " << (out / "mesh.json").string() << "\n";
}

void stage_modal(ModelState& m, Index count, const fs::path& out) {
    m.ensure_modes(count);
    std::ostringstream csv;
    csv << "# manifest " << m.manifest("modal;count=" + std::to_string(count)) << "\n";
    csv << "mode,omega_rad_s,frequency_hz,label,transverse_ratio\n";
    const VecX hz = m.modes.frequencies_hz();
    const Index shown = count == -1 ? m.modes.count() : std::min(count, m.modes.count());
    for (Index i = 0; i < shown; ++i) {
        const bool bending = m.labels[static_cast<std::size_t>(i)].label == rf::modal::ModeLabel::Bending;
        csv << (i + 1) << "," << fnum(m.modes.omega[i]) << "," << fnum(hz[i]) << ","
            << (bending ? "bending" : "non-bending") << ","
            << fnum(m.labels[static_cast<std::size_t>(i)].transverse_ratio) << "\n";
    }
    write_text(out / "modes.csv", csv.str());
    std::cout << "modal: " << shown << " modes, f1 = " << fnum(hz[0]) << " Hz -> " << (out / "modes.csv").string()
              << "\n";
}

void stage_step(ModelState& m, std::vector<Index> modes_1b, Real ratio, Index count, const fs::path& out) {
    m.ensure_modes(count);
    std::sort(modes_1b.begin(), modes_1b.end());
    modes_1b.erase(std::unique(modes_1b.begin(), modes_1b.end()), modes_1b.end());
    std::vector<Index> subset;
    std::vector<Real> lambdas;
    std::string ids;
    for (const Index p1 : modes_1b) {
        const Index p = to_zero_based(p1, m.modes.count(), "mode");
        subset.push_back(p);
        lambdas.push_back(rf::step::step_lambda(m.modes.phi.col(p), m.preset.thickness, ratio));
        ids += (ids.empty() ? "" : ",") + std::to_string(p1);
    }
    const auto cc = subset.size() == 1 ? rf::step::step_single(m.force, m.modes, subset[0], lambdas[0])
                                       : rf::step::step_subset(m.force, m.modes, subset, lambdas);
    std::ostringstream csv;
    csv << "# manifest " << m.manifest("step;modes=" + ids + ";ratio=" + pnum(ratio)) << "\n" << cc.to_csv();
    write_text(out / "coefficients.csv", csv.str());
    std::cout << "step: modes {" << ids << "}, " << cc.n_excited() << " excited on " << cc.n_projected()
              << " projected -> " << (out / "coefficients.csv").string() << "\n";
}

void stage_condense(ModelState& m, Index mode_1b, const fs::path& out) {
    m.ensure_modes(-1);
    const Index p = to_zero_based(mode_1b, m.modes.count(), "mode");
    const auto& cc = m.single(p);
    const auto spec = rf::reduce::correction_spectrum(cc, m.modes, 0);
    const auto conv =
        rf::reduce::condensation_convergence(cc, m.modes, 0, rf::reduce::SlaveOrdering::DescendingFactor);
    const std::string manifest = m.manifest("condense;mode=" + std::to_string(mode_1b));

    std::ostringstream sp;
    sp << "# manifest " << manifest << "\n";
    sp << "# mode " << mode_1b << "\n";
    sp << "# beta " << fnum(spec.beta_ref) << "\n";
    sp << "# gamma " << fnum(conv.gamma_full) << "\n";
    sp << "slave,omega_rad_s,factor,normalized,relevant\n";
    for (std::size_t i = 0; i < spec.s.size(); ++i)
        sp << (spec.s[i] + 1) << "," << fnum(spec.omega[static_cast<Index>(i)]) << ","
           << fnum(spec.factor[static_cast<Index>(i)]) << "," << fnum(spec.normalized[static_cast<Index>(i)])
           << "," << (spec.relevant[i] ? 1 : 0) << "\n";
    write_text(out / "condense_spectrum.csv", sp.str());

    std::ostringstream cv;
    cv << "# manifest " << manifest << "\n";
    cv << "# slaves_to_1e2 " << conv.count_to_1e2 << "\n";
    cv << "# slaves_to_1e3 " << conv.count_to_1e3 << "\n";
    cv << "retained_slaves,gamma\n";
    for (Index mi = 0; mi < conv.gamma.size(); ++mi) cv << mi << "," << fnum(conv.gamma[mi]) << "\n";
    write_text(out / "condense_convergence.csv", cv.str());

    std::cout << "condense: mode " << mode_1b << ", beta = " << fnum(spec.beta_ref)
              << ", gamma = " << fnum(conv.gamma_full) << ", slaves to 1% = " << conv.count_to_1e2 << " -> "
              << (out / "condense_spectrum.csv").string() << "\n";
}

void stage_smd(ModelState& m, Index mode_1b, Index count, const fs::path& out) {
    m.ensure_modes(count);
    const Index p = to_zero_based(mode_1b, m.modes.count(), "mode");
    const VecX phi = m.modes.phi.col(p);
    const Real h = m.preset.thickness;
    const auto solveK = rf::reduce::make_stiffness_solver(*m.asmb);
    const VecX theta = rf::reduce::smd_same(m.force, solveK, phi, rf::step::step_lambda(phi, h, 0.05));
    const Real gamma = rf::reduce::smd_condensed_cubic(m.force, phi, theta, rf::step::step_lambda(phi, h, 0.01));
    const auto& cc = m.single(p);
    const VecX recon = rf::reduce::smd_modal_reconstruction(m.modes, cc.alpha_column(0, 0));
    const Real residual = (theta - recon).norm() / theta.norm();
    const VecX part = rf::reduce::smd_participations(*m.asmb, m.modes, theta);

    std::ostringstream csv;
    csv << "# manifest " << m.manifest("smd;mode=" + std::to_string(mode_1b) + ";count=" + std::to_string(count))
        << "\n";
    csv << "# mode " << mode_1b << "\n";
    csv << "# gamma_manifold " << fnum(gamma) << "\n";
    csv << "# reconstruction_residual " << fnum(residual) << "\n";
    csv << "mode,participation\n";
    for (Index s = 0; s < part.size(); ++s) csv << (s + 1) << "," << fnum(part[s]) << "\n";
    write_text(out / "smd.csv", csv.str());
    std::cout << "smd: mode " << mode_1b << ", gamma = " << fnum(gamma) << ", expansion residual = "
              << fnum(residual) << " -> " << (out / "smd.csv").string() << "\n";
}

void stage_nnm(ModelState& m, Index mode_1b, const fs::path& out) {
    m.ensure_modes(-1);
    const Index p = to_zero_based(mode_1b, m.modes.count(), "mode");
    const auto& cc = m.single(p);
    const auto rom = rf::reduce::nnm_rom(cc, m.modes, 0);
    const Real gamma = rf::reduce::condensed_cubic(cc, m.modes, 0, 0, 0, 0);
    json j;
    j["manifest"] = m.manifest("nnm;mode=" + std::to_string(mode_1b));
    j["mode"] = mode_1b;
    j["omega"] = rom.omega_p;
    j["cubic"] = rom.cubic;
    j["velocity_sq"] = rom.velocity_sq;
    j["gamma_condensed"] = gamma;
    write_text(out / "nnm.json", j.dump(1) + "\n");
    std::cout << "nnm: mode " << mode_1b << ", cubic = " << fnum(rom.cubic) << ", velocity term = "
              << fnum(rom.velocity_sq) << " -> " << (out / "nnm.json").string() << "\n";
}

void stage_mstep(ModelState& m, Index mode_1b, std::string set_name, Real ratio, bool sweep, Index count,
                 const fs::path& out) {
    m.ensure_modes(count);
    const Index p = to_zero_based(mode_1b, m.modes.count(), "mode");
    if (set_name.empty()) set_name = m.midset;
    const auto masters = rf::mstep::select_masters(*m.asmb, set_name, 2);
    Real mmax = 0;
    for (const Index dof : masters) mmax = std::max(mmax, std::abs(m.modes.phi(dof, p)));
    if (mmax <= 0) throw std::runtime_error("master set does not move in mode " + std::to_string(mode_1b));
    const Real lambda = ratio * m.preset.thickness / mmax;

    const auto gamma = rf::mstep::mstep_gamma(*m.asmb, m.modes, p, masters, lambda);
    const auto quality = rf::mstep::mstep_quality(*m.asmb, m.modes, p, masters, lambda);
    const std::string params = "mstep;mode=" + std::to_string(mode_1b) + ";set=" + set_name +
                               ";ratio=" + pnum(ratio);
    json j;
    j["manifest"] = m.manifest(params);
    j["mode"] = mode_1b;
    j["set"] = set_name;
    j["masters"] = masters.size();
    j["amplitude_ratio"] = ratio;
    j["lambda"] = lambda;
    j["gamma"] = gamma.gamma_ppp;
    j["e1"] = quality.e1_pp;
    j["e2"] = quality.e2;
    j["reliable"] = quality.reliable;
    j["warnings"] = quality.warnings;
    write_text(out / "mstep.json", j.dump(1) + "\n");
    std::cout << "mstep: mode " << mode_1b << " on " << set_name << " (" << masters.size()
              << " masters), gamma = " << fnum(gamma.gamma_ppp) << ", e1 = " << fnum(quality.e1_pp)
              << ", e2 = " << fnum(quality.e2) << " -> " << (out / "mstep.json").string() << "\n";

    if (sweep) {
        const auto& cc = m.single(p);
        const Real gamma_ref = rf::reduce::condensed_cubic(cc, m.modes, 0, 0, 0, 0);
        const std::vector<Real> grid = {0.05, 0.1, 0.2, 0.35, 0.5, 0.75, 1.0, 1.5};
        const auto sw = rf::mstep::amplitude_validity_sweep(*m.asmb, m.modes, p, masters, grid,
                                                            m.preset.thickness, gamma_ref, 0.03);
        std::ostringstream csv;
        csv << "# manifest " << m.manifest(params + ";sweep") << "\n";
        csv << "# gamma_reference " << fnum(gamma_ref) << "\n";
        csv << "# band " << pnum(sw.lo) << " " << pnum(sw.hi) << "\n";
        csv << "amplitude_ratio,gamma,deviation\n";
        for (Index i = 0; i < sw.amplitude.size(); ++i)
            csv << pnum(sw.amplitude[i]) << "," << fnum(sw.gamma[i]) << "," << fnum(sw.deviation[i]) << "\n";
        write_text(out / "mstep_sweep.csv", csv.str());
        std::cout << "mstep sweep: validity band [" << pnum(sw.lo) << ", " << pnum(sw.hi) << "] thickness units -> "
                  << (out / "mstep_sweep.csv").string() << "\n";
    }
}

struct RomSpec {
    std::vector<Real> duffing; ///< synthetic: omega, zeta, gamma, forcing
    Index mode_1b = 1;
    Real zeta = 0.002;
    Real forcing = 0;
    std::string kind = "condensed"; ///< condensed | nnm
};

// Single-oscillator ROM either given directly or condensed out of the model.
rf::rom::OscillatorSystem build_rom(ModelState* m, const RomSpec& spec, bool forced, std::string& desc) {
    if (!spec.duffing.empty()) {
        if (spec.duffing.size() != 4) throw std::invalid_argument("--duffing needs omega,zeta,gamma,forcing");
        desc = "duffing;" + pnum(spec.duffing[0]) + ";" + pnum(spec.duffing[1]) + ";" + pnum(spec.duffing[2]) +
               ";" + pnum(spec.duffing[3]);
        return rf::rom::OscillatorSystem::duffing(spec.duffing[0], spec.duffing[1], spec.duffing[2],
                                                  spec.duffing[3]);
    }
    if (m == nullptr) throw std::invalid_argument("a case or mesh is required unless --duffing is given");
    m->ensure_modes(-1);
    const Index p = to_zero_based(spec.mode_1b, m->modes.count(), "mode");
    const auto& cc = m->single(p);
    desc = "mode=" + std::to_string(spec.mode_1b) + ";kind=" + spec.kind + ";zeta=" + pnum(spec.zeta) +
           ";forcing=" + pnum(spec.forcing);
    if (spec.kind == "nnm") {
        const auto rom = rf::reduce::nnm_rom(cc, m->modes, 0);
        return rf::rom::OscillatorSystem::from_nnm(rom, spec.zeta, forced ? spec.forcing : 0.0);
    }
    if (spec.kind != "condensed") throw std::invalid_argument("--rom must be condensed or nnm");
    const Real gamma = rf::reduce::condensed_cubic(cc, m->modes, 0, 0, 0, 0);
    return rf::rom::OscillatorSystem::duffing(m->modes.omega[p], spec.zeta, gamma, forced ? spec.forcing : 0.0);
}

void stage_frf(ModelState* m, const RomSpec& spec, std::pair<Real, Real> window, Index harmonics, Real ds0,
               const std::string& seed, const fs::path& out) {
    std::string desc;
    auto sys = build_rom(m, spec, true, desc);
    if (sys.forcing.cwiseAbs().maxCoeff() == 0) throw std::invalid_argument("frf needs a nonzero forcing");
    const Real w = sys.omega[0];
    rf::rom::FrfOptions opt;
    opt.omega_min = window.first * w;
    opt.omega_max = window.second * w;
    opt.ds0 = ds0;
    const rf::rom::HbmProblem hbm(sys, harmonics);
    const auto branch = rf::rom::continue_frf(hbm, VecX::Ones(sys.n()), opt);

    std::ostringstream csv;
    csv << "# manifest "
        << rf::util::hash_hex((seed + "|frf;" + desc + ";window=" + pnum(window.first) + "," +
                                                pnum(window.second) + ";H=" + std::to_string(harmonics)))
        << "\n";
    csv << "# fold_traversed " << (branch.traversed_fold ? 1 : 0) << "\n";
    csv << "omega_rad_s,amplitude\n";
    for (const auto& pt : branch.points) csv << fnum(pt.omega) << "," << fnum(pt.amplitude) << "\n";
    write_text(out / "frf.csv", csv.str());
    std::cout << "frf: " << branch.points.size() << " points, folds " << (branch.traversed_fold ? "yes" : "no")
              << " -> " << (out / "frf.csv").string() << "\n";
}

void stage_backbone(ModelState* m, const RomSpec& spec, Real amax, Index points, Index harmonics,
                    const std::string& seed, const fs::path& out) {
    std::string desc;
    auto sys = build_rom(m, spec, false, desc);
    sys.zeta.setZero();
    sys.forcing.setZero();
    if (amax <= 0) {
        if (m == nullptr) throw std::invalid_argument("--amax is required with --duffing");
        const Index p = to_zero_based(spec.mode_1b, m->modes.count(), "mode");
        amax = m->preset.thickness / m->modes.phi.col(p).cwiseAbs().maxCoeff();
    }
    std::vector<Real> amps;
    for (Index i = 1; i <= points; ++i) amps.push_back(amax * static_cast<Real>(i) / static_cast<Real>(points));
    const auto curve = rf::rom::trace_backbone(sys, harmonics, 0, amps, VecX::Ones(sys.n()));

    std::ostringstream csv;
    csv << "# manifest "
        << rf::util::hash_hex((seed + "|backbone;" + desc + ";amax=" + pnum(amax) +
                                                ";points=" + std::to_string(points) +
                                                ";H=" + std::to_string(harmonics)))
        << "\n";
    csv << "coefficient,omega_rad_s,amplitude\n";
    for (const auto& pt : curve) csv << fnum(pt.coeff) << "," << fnum(pt.omega) << "," << fnum(pt.amplitude) << "\n";
    write_text(out / "backbone.csv", csv.str());
    const Real shift = curve.empty() ? 0 : curve.back().omega / sys.omega[0] - 1.0;
    std::cout << "backbone: " << curve.size() << " points, end shift " << fnum(shift) << " -> "
              << (out / "backbone.csv").string() << "\n";
}

} // namespace

int main(int argc, char** argv) {
    // The first token names the structure (a built-in case or a mesh JSON
    // path) unless it is a stage; stages then chain left to right.
    static const std::set<std::string> stage_names = {"mesh", "modal",    "step", "condense", "smd",
                                                      "nnm",  "mstep",    "frf",  "backbone", "accept"};
    std::vector<std::string> args;
    ModelOptions model_opts;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    if (!args.empty() && !stage_names.count(args[0]) && args[0][0] != '-') {
        model_opts.source = args[0];
        args.erase(args.begin());
    }

    CLI::App app{"romforge3d: nonlinear reduced-order models from 3D finite elements\n"
                 "usage: romforge3d <case|mesh.json> <stage...> [flags]   (ROMFORGE_THREADS sets the worker count)"};
    app.require_subcommand(0, 0); // chained subcommands, validated manually below

    std::string out_dir = "out";
    app.add_option("--out", out_dir, "output directory")->capture_default_str();
    app.add_option("--nx", model_opts.nx, "beam elements along the length");
    app.add_option("--ny", model_opts.ny, "beam elements across the width");
    app.add_option("--nz", model_opts.nz, "beam elements through the thickness");
    app.add_option("--ns", model_opts.ns, "plate center-block divisions");
    app.add_option("--nr", model_opts.nr, "plate ring divisions");
    app.add_option("--ntz", model_opts.ntz, "plate thickness layers");
    app.add_option("--nu", model_opts.nu, "Poisson ratio (beam cases and mesh files)")->capture_default_str();
    app.add_option("--E", model_opts.E, "Young modulus for mesh files")->capture_default_str();
    app.add_option("--rho", model_opts.rho, "density for mesh files")->capture_default_str();
    app.add_option("--thickness", model_opts.thickness, "amplitude scale for mesh files (default: min box extent)");

    auto* c_mesh = app.add_subcommand("mesh", "generate and save the mesh");

    auto* c_modal = app.add_subcommand("modal", "eigenmodes and classification");
    Index modal_count = 20;
    c_modal->add_option("--count", modal_count, "number of modes (-1: full spectrum)")->capture_default_str();

    auto* c_step = app.add_subcommand("step", "modal coupling coefficients from static force evaluations");
    std::vector<Index> step_modes = {1};
    Real step_ratio = 0.05;
    Index step_count = -1;
    c_step->add_option("--modes", step_modes, "excited modes (1-based)")->capture_default_str();
    c_step->add_option("--ratio", step_ratio, "amplitude in thickness units")->capture_default_str();
    c_step->add_option("--count", step_count, "projection modes (-1: full spectrum)")->capture_default_str();

    auto* c_cond = app.add_subcommand("condense", "slave correction spectrum and convergence");
    Index cond_mode = 1;
    c_cond->add_option("--mode", cond_mode, "master mode (1-based)")->capture_default_str();

    auto* c_smd = app.add_subcommand("smd", "static modal derivative and manifold cubic coefficient");
    Index smd_mode = 1, smd_count = -1;
    c_smd->add_option("--mode", smd_mode, "master mode (1-based)")->capture_default_str();
    c_smd->add_option("--count", smd_count, "modes for the participation expansion (-1: full)")->capture_default_str();

    auto* c_nnm = app.add_subcommand("nnm", "invariant-manifold oscillator coefficients");
    Index nnm_mode = 1;
    c_nnm->add_option("--mode", nnm_mode, "master mode (1-based)")->capture_default_str();

    auto* c_mstep = app.add_subcommand("mstep", "constrained-master coefficients and quality indicators");
    Index mstep_mode = 1, mstep_count = -1;
    std::string mstep_set;
    Real mstep_ratio = 0.5;
    bool mstep_sweep = false;
    c_mstep->add_option("--mode", mstep_mode, "master mode (1-based)")->capture_default_str();
    c_mstep->add_option("--set", mstep_set, "master node set (default: midline/midsurface)");
    c_mstep->add_option("--ratio", mstep_ratio, "master amplitude in thickness units")->capture_default_str();
    c_mstep->add_flag("--sweep", mstep_sweep, "amplitude validity sweep");
    c_mstep->add_option("--count", mstep_count, "projection modes (-1: full spectrum)")->capture_default_str();

    auto* c_frf = app.add_subcommand("frf", "forced response of the single-mode ROM by continuation");
    RomSpec frf_spec;
    std::pair<Real, Real> frf_window = {0.9, 1.3};
    Index frf_h = 5;
    Real frf_ds0 = 0.005;
    c_frf->add_option("--duffing", frf_spec.duffing, "synthetic oscillator: omega zeta gamma forcing")->expected(4);
    c_frf->add_option("--mode", frf_spec.mode_1b, "master mode (1-based)")->capture_default_str();
    c_frf->add_option("--rom", frf_spec.kind, "condensed | nnm")->capture_default_str();
    c_frf->add_option("--zeta", frf_spec.zeta, "modal damping ratio")->capture_default_str();
    c_frf->add_option("--force", frf_spec.forcing, "modal forcing amplitude");
    c_frf->add_option("--window", frf_window, "frequency window as multiples of the linear frequency")
        ->capture_default_str();
    c_frf->add_option("--harmonics", frf_h, "retained harmonics")->capture_default_str();
    c_frf->add_option("--ds0", frf_ds0, "initial arclength step")->capture_default_str();

    auto* c_back = app.add_subcommand("backbone", "undamped frequency-amplitude curve of the ROM");
    RomSpec back_spec;
    Real back_amax = 0;
    Index back_points = 20, back_h = 5;
    c_back->add_option("--duffing", back_spec.duffing, "synthetic oscillator: omega zeta gamma forcing")->expected(4);
    c_back->add_option("--mode", back_spec.mode_1b, "master mode (1-based)")->capture_default_str();
    c_back->add_option("--rom", back_spec.kind, "condensed | nnm")->capture_default_str();
    c_back->add_option("--amax", back_amax, "largest modal amplitude (default: one thickness)");
    c_back->add_option("--points", back_points, "number of amplitudes")->capture_default_str();
    c_back->add_option("--harmonics", back_h, "retained harmonics")->capture_default_str();

    auto* c_accept = app.add_subcommand("accept", "run the acceptance ladder");
    std::string accept_level = "full";
    c_accept->add_option("--level", accept_level, "quick | full")->capture_default_str();

    std::vector<const char*> cargv;
    cargv.push_back(argv[0]);
    for (const auto& a : args) cargv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(cargv.size()), cargv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    const auto parsed = app.get_subcommands();
    if (parsed.empty()) {
        std::cerr << app.help();
        return 1;
    }

    try {
        std::unique_ptr<ModelState> model;
        auto need_model = [&]() -> ModelState& {
            if (!model) {
                if (model_opts.source.empty())
                    throw std::invalid_argument("this stage needs a case name or mesh JSON path first");
                model = std::make_unique<ModelState>(model_opts);
            }
            return *model;
        };
        const fs::path out(out_dir);

        for (const CLI::App* sub : parsed) {
            if (sub == c_mesh) stage_mesh(need_model(), out);
            else if (sub == c_modal) stage_modal(need_model(), modal_count, out);
            else if (sub == c_step) stage_step(need_model(), step_modes, step_ratio, step_count, out);
            else if (sub == c_cond) stage_condense(need_model(), cond_mode, out);
            else if (sub == c_smd) stage_smd(need_model(), smd_mode, smd_count, out);
            else if (sub == c_nnm) stage_nnm(need_model(), nnm_mode, out);
            else if (sub == c_mstep)
                stage_mstep(need_model(), mstep_mode, mstep_set, mstep_ratio, mstep_sweep, mstep_count, out);
            else if (sub == c_frf) {
                ModelState* mp = frf_spec.duffing.empty() ? &need_model() : model.get();
                const std::string seed = mp ? mp->seed : "synthetic";
                stage_frf(mp, frf_spec, frf_window, frf_h, frf_ds0, seed, out);
            } else if (sub == c_back) {
                ModelState* mp = back_spec.duffing.empty() ? &need_model() : model.get();
                const std::string seed = mp ? mp->seed : "synthetic";
                stage_backbone(mp, back_spec, back_amax, back_points, back_h, seed, out);
            } else if (sub == c_accept) {
                const auto report =
                    rf::accept::run_acceptance(rf::accept::level_from_string(accept_level), std::cout);
                std::ostringstream txt;
                for (const auto& r : report.results)
                    txt << (r.pass ? "[PASS] " : "[FAIL] ") << r.id << " " << r.name << " | " << r.detail << "\n";
                write_text(out / "acceptance.txt", txt.str());
                if (report.failures() > 0) return 2;
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
