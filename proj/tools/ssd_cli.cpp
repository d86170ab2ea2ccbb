// Command-line front end for constructing, verifying, reconstructing and
// searching strongly self-dual polyhedra.
//
// Exit codes: 0 success / verified, 1 verification failed, 2 usage error,
// 3 numerical failure (no convergence, degenerate configuration, ...).

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "ssd/ssd.hpp"

namespace {

int error_exit_code(const ssd::Error& e) {
    const std::string& c = e.class_name();
    if (c == "VerificationFailed") return 1;
    if (c == "NoConvergence" || c == "DegenerateDiscriminant" || c == "NoClosure" ||
        c == "OpenChain" || c == "Overflow" || c == "NotConcyclic" || c == "NotConcyclicFace" ||
        c == "NonConvex" || c == "NoSigmaCandidate")
        return 3;
    return 2;  // bad input / usage
}

void emit_polytope(const ssd::Polytope& poly, const std::string& provenance,
                   const std::string& out_path, const std::string& off_path) {
    ssd::PolytopeDocument doc;
    doc.poly = poly;
    doc.provenance = provenance;
    if (out_path.empty()) {
        ssd::write_document(std::cout, doc);
    } else {
        std::ofstream os(out_path);
        if (!os) throw ssd::ParseError("cannot open output file " + out_path);
        ssd::write_document(os, doc);
        std::cout << "wrote " << out_path << "\n";
    }
    if (!off_path.empty()) {
        std::ofstream os(off_path);
        if (!os) throw ssd::ParseError("cannot open output file " + off_path);
        ssd::write_off(os, poly);
        std::cout << "wrote " << off_path << "\n";
    }
}

ssd::Polytope load_polytope(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ssd::ParseError("cannot open " + path);
    return ssd::read_document(is).poly;
}

// Face file: one "x y z" triple per line; '#' starts a comment.
std::vector<ssd::Vec3> load_face(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ssd::ParseError("cannot open " + path);
    std::vector<ssd::Vec3> pts;
    std::string line;
    while (std::getline(is, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        ssd::Vec3 v;
        if (ls >> v.x >> v.y >> v.z) pts.push_back(v);
    }
    if (pts.size() < 3) throw ssd::ParseError("face file has fewer than 3 points");
    return pts;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"strongly self-dual polyhedra: construct, verify, reconstruct, search"};
    app.require_subcommand(1);

    // construct ltype
    auto* construct = app.add_subcommand("construct", "construct a polytope family member");
    construct->require_subcommand(1);
    auto* ltype = construct->add_subcommand("ltype", "L-type polyhedron P(k,l)");
    int lt_k = 1, lt_l = 3;
    double lt_tol = 1e-9;
    std::string lt_out, lt_off;
    ltype->add_option("--k", lt_k, "number of layers")->required();
    ltype->add_option("--l", lt_l, "base polygon size (odd)")->required();
    ltype->add_option("--tol", lt_tol, "verification tolerance");
    ltype->add_option("--out", lt_out, "write polytope document here (default stdout)");
    ltype->add_option("--off", lt_off, "also write an OFF mesh");

    // verify
    auto* verify = app.add_subcommand("verify", "verify a polytope document");
    std::string verify_file;
    double verify_tol = 1e-9;
    bool verify_kv = false;
    verify->add_option("file", verify_file, "polytope document")->required();
    verify->add_option("--tol", verify_tol, "tolerance");
    verify->add_flag("--keyvalue", verify_kv, "structured key: value output");

    // reconstruct
    auto* reconstruct = app.add_subcommand("reconstruct", "grow a polytope from one face");
    std::string rec_face, rec_out, rec_off;
    double rec_closure = 0.0, rec_tol = 1e-9;
    reconstruct->add_option("--face", rec_face, "file with one vertex per line (x y z)")
        ->required();
    reconstruct->add_option("--assume-closure", rec_closure,
                            "merge near-coincident frontier points at this tolerance");
    reconstruct->add_option("--tol", rec_tol, "verification tolerance");
    reconstruct->add_option("--out", rec_out, "write polytope document here");
    reconstruct->add_option("--off", rec_off, "also write an OFF mesh");

    // search pentagon
    auto* search = app.add_subcommand("search", "numerical search");
    search->require_subcommand(1);
    auto* pentagon = search->add_subcommand("pentagon", "three-parameter pentagon search");
    double sp_kappa = 45.0, sp_lambda = 135.0, sp_r = 0.8, sp_delta0 = 0.1,
           sp_shrink = 1.0 / 3.0, sp_tol = 1e-15;
    int sp_n = 200, sp_max_steps = 40;
    unsigned sp_threads = 0;
    std::string sp_out, sp_off;
    bool sp_structured = false;
    pentagon->add_option("--kappa", sp_kappa, "seed kappa in degrees");
    pentagon->add_option("--lambda", sp_lambda, "seed lambda in degrees");
    pentagon->add_option("--r", sp_r, "seed insphere radius");
    pentagon->add_option("--delta0", sp_delta0, "initial box half-width (radians / absolute)");
    pentagon->add_option("--n", sp_n, "grid subdivisions per axis");
    pentagon->add_option("--shrink", sp_shrink, "box shrink factor per step");
    pentagon->add_option("--tol", sp_tol, "residual stop threshold");
    pentagon->add_option("--max-steps", sp_max_steps, "maximum refinement steps");
    pentagon->add_option("--threads", sp_threads, "worker threads (0 = hardware)");
    pentagon->add_option("--out", sp_out, "write the converged polytope document here");
    pentagon->add_option("--off", sp_off, "also write an OFF mesh");
    pentagon->add_flag("--structured", sp_structured, "structured trace output");

    // presets
    auto* preset = app.add_subcommand("preset", "built-in polyhedra");
    std::string preset_name, preset_out, preset_off;
    preset->add_option("name", preset_name, "ssd23 | kmw8")->required();
    preset->add_option("--out", preset_out, "write polytope document here");
    preset->add_option("--off", preset_off, "also write an OFF mesh");

    // enumerate
    auto* enumerate = app.add_subcommand("enumerate", "arithmetic face-vector feasibility");
    int enum_n = 8;
    enumerate->add_option("--n", enum_n, "vertex count")->required();

    // export
    auto* exp = app.add_subcommand("export", "convert a polytope document to a mesh file");
    std::string exp_file, exp_format = "off", exp_out;
    exp->add_option("file", exp_file, "polytope document")->required();
    exp->add_option("--format", exp_format, "off | obj");
    exp->add_option("--out", exp_out, "output file (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*ltype) {
            ssd::Polytope poly = ssd::construct_ltype(lt_k, lt_l, lt_tol);
            std::ostringstream prov;
            prov << "construct ltype --k " << lt_k << " --l " << lt_l << " --tol " << lt_tol;
            emit_polytope(poly, prov.str(), lt_out, lt_off);
            return 0;
        }
        if (*verify) {
            ssd::Polytope poly = load_polytope(verify_file);
            ssd::SsdReport rep = ssd::verify_ssd(poly, verify_tol);
            if (verify_kv)
                ssd::write_report_keyvalue(std::cout, rep);
            else
                ssd::write_report_text(std::cout, rep);
            return rep.passed ? 0 : 1;
        }
        if (*reconstruct) {
            std::vector<ssd::Vec3> face = load_face(rec_face);
            ssd::ReconstructOptions opt;
            opt.assume_closure = rec_closure;
            opt.verify_tol = rec_tol;
            ssd::Polytope poly = ssd::reconstruct_from_face(face, opt);
            std::ostringstream prov;
            prov << "reconstruct --face " << rec_face;
            if (rec_closure > 0) prov << " --assume-closure " << rec_closure;
            emit_polytope(poly, prov.str(), rec_out, rec_off);
            return 0;
        }
        if (*pentagon) {
            ssd::SearchParams params;
            params.kappa = ssd::deg2rad(sp_kappa);
            params.lambda = ssd::deg2rad(sp_lambda);
            params.r = sp_r;
            params.delta0 = sp_delta0;
            params.n = sp_n;
            params.shrink = sp_shrink;
            params.tol = sp_tol;
            params.max_steps = sp_max_steps;
            params.threads = sp_threads;
            ssd::SearchResult res = ssd::grid_refine(params);
            ssd::write_trace_table(std::cout, res, sp_structured);
            std::cout << "converged: " << (res.converged ? "yes" : "no") << "\n";
            char buf[256];
            std::snprintf(buf, sizeof buf,
                          "kappa: %.17g deg\nlambda: %.17g deg\nr: %.17g\nerror: %.17g\n",
                          ssd::rad2deg(res.kappa), ssd::rad2deg(res.lambda), res.r, res.error);
            std::cout << buf;
            ssd::require_converged(res, params.tol);
            ssd::Polytope poly = ssd::assemble_ssd23(res.kappa, res.lambda, res.r, 1e-9);
            std::ostringstream prov;
            prov << "search pentagon --kappa " << sp_kappa << " --lambda " << sp_lambda
                 << " --r " << sp_r << " --delta0 " << sp_delta0 << " --n " << sp_n
                 << " --shrink " << sp_shrink << " --tol " << sp_tol << " --max-steps "
                 << sp_max_steps;
            emit_polytope(poly, prov.str(), sp_out, sp_off);
            return 0;
        }
        if (*preset) {
            ssd::Polytope poly;
            if (preset_name == "ssd23") {
                poly = ssd::assemble_ssd23(ssd::deg2rad(ssd::kSsd23KappaDeg),
                                           ssd::deg2rad(ssd::kSsd23LambdaDeg), ssd::kSsd23R,
                                           1e-9);
            } else if (preset_name == "kmw8") {
                poly = ssd::kmw8();
            } else {
                std::cerr << "InvalidParams: unknown preset '" << preset_name << "'\n";
                return 2;
            }
            emit_polytope(poly, "preset " + preset_name, preset_out, preset_off);
            return 0;
        }
        if (*enumerate) {
            ssd::CandidateList cl = ssd::enumerate_face_vectors(enum_n);
            auto print_fv = [](const ssd::FaceVector& fv) {
                std::ostringstream os;
                bool first = true;
                for (auto& [l, c] : fv.counts) {
                    if (!first) os << " ";
                    first = false;
                    os << "a" << l << "=" << c;
                }
                return os.str();
            };
            std::cout << "n: " << cl.n << "\n";
            std::cout << "feasible: " << cl.feasible.size() << "\n";
            for (const auto& fv : cl.feasible) std::cout << "  " << print_fv(fv) << "\n";
            std::cout << "excluded_parity: " << cl.excluded_parity.size() << "\n";
            for (const auto& fv : cl.excluded_parity) std::cout << "  " << print_fv(fv) << "\n";
            return 0;
        }
        if (*exp) {
            ssd::Polytope poly = load_polytope(exp_file);
            std::ostream* os = &std::cout;
            std::ofstream file;
            if (!exp_out.empty()) {
                file.open(exp_out);
                if (!file) throw ssd::ParseError("cannot open output file " + exp_out);
                os = &file;
            }
            if (exp_format == "off")
                ssd::write_off(*os, poly);
            else if (exp_format == "obj")
                ssd::write_obj(*os, poly);
            else {
                std::cerr << "InvalidParams: unknown format '" << exp_format << "'\n";
                return 2;
            }
            return 0;
        }
    } catch (const ssd::Error& e) {
        std::cerr << e.what() << "\n";
        return error_exit_code(e);
    } catch (const std::exception& e) {
        std::cerr << "InternalError: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
