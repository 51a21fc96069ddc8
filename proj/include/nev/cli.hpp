#pragma once

#include <complex>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nev/inversion.hpp"
#include "nev/json_io.hpp"
#include "nev/kernel.hpp"
#include "nev/realization.hpp"

namespace nev::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitAssumption = 4;

inline cplx parse_complex(const std::string& text) {
    const auto comma = text.find(',');
    try {
        if (comma == std::string::npos) return cplx{std::stod(text), 0.0};
        return cplx{std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
    } catch (const std::exception&) {
        throw ValidationError("flag_invalid", "cannot parse complex value '" + text + "'");
    }
}

inline json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

namespace detail {

inline void print_matrix_text(std::ostream& os, const std::string& name, const Matrix& m) {
    os << name << " (" << m.rows() << "x" << m.cols() << "):\n";
    os << std::setprecision(6);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        os << "  ";
        for (std::size_t j = 0; j < m.cols(); ++j) {
            const cplx v = m(i, j);
            os << std::setw(11) << v.real() << (v.imag() < 0 ? "-" : "+") << std::setw(0)
               << std::abs(v.imag()) << "i  ";
        }
        os << "\n";
    }
}

inline void print_json_as_text(std::ostream& os, const json& j, int indent = 0) {
    const std::string pad(static_cast<std::size_t>(indent), ' ');
    for (const auto& [key, value] : j.items()) {
        if (value.is_object()) {
            os << pad << key << ":\n";
            print_json_as_text(os, value, indent + 2);
        } else {
            os << pad << key << ": " << value.dump() << "\n";
        }
    }
}

}  // namespace detail

struct Options {
    std::string input;
    double tol_value = 1e-9;
    double condition_cap = 1e8;
    std::uint64_t seed = 0;
    std::string format = "json";

    Tolerance tolerance() const {
        Tolerance t;
        t.relative_eps = tol_value;
        t.sign_eps = tol_value;
        t.condition_cap = condition_cap;
        t.validate();
        return t;
    }
};

/// Run one CLI invocation; the report goes to `out`, diagnostics to `err`.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"generalized Nevanlinna realizations: evaluation, inversion, decomposition"};
    app.require_subcommand(1);

    Options opt;
    std::string z_text = "0,1";
    std::string alpha_text = "0";
    std::size_t kernel_samples = 12;
    std::size_t kernel_directions = 2;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--input", opt.input, "realization document (JSON)")->required();
        sub->add_option("--tol", opt.tol_value, "relative/sign tolerance");
        sub->add_option("--cond-cap", opt.condition_cap, "bounded-invertibility condition cap");
        sub->add_option("--seed", opt.seed, "seed for all sampled points and directions");
        sub->add_option("--format", opt.format, "json|text")
            ->check(CLI::IsMember({"json", "text"}));
        return sub;
    };

    auto* c_validate = add_common(app.add_subcommand("validate", "check document invariants"));
    auto* c_eval = add_common(app.add_subcommand("eval", "evaluate Q(z)"));
    c_eval->add_option("--z", z_text, "evaluation point re,im")->required();
    auto* c_qpinf = add_common(app.add_subcommand("qprime-inf", "derivative at infinity"));
    auto* c_minimal = add_common(app.add_subcommand("minimal", "minimality (reachability) test"));
    auto* c_invert = add_common(app.add_subcommand("invert", "evaluate -Q(z)^{-1}"));
    c_invert->add_option("--z", z_text, "evaluation point re,im")->required();
    auto* c_decompose =
        add_common(app.add_subcommand("decompose", "two-part decomposition of the inverse"));
    auto* c_indices = add_common(app.add_subcommand("indices", "negative-index bookkeeping"));
    auto* c_zeros = add_common(app.add_subcommand("zeros", "finite generalized zeros of Q"));
    auto* c_split = add_common(app.add_subcommand("split", "additive split at a pole"));
    c_split->add_option("--alpha", alpha_text, "pole location re[,im]")->required();
    auto* c_verify = add_common(app.add_subcommand("verify", "run the verification suites"));
    auto* c_kernel = add_common(app.add_subcommand("kernel", "negative-squares estimate"));
    c_kernel->add_option("--samples", kernel_samples, "number of sample points");
    c_kernel->add_option("--directions", kernel_directions, "directions per point");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help
            out << app.help();
            return kExitOk;
        }
        err << e.what() << "\n";
        return kExitValidation;
    }

    json report;
    int exit_code = kExitOk;
    try {
        const Tolerance tol = opt.tolerance();
        const RealizationDocument doc = load_document(opt.input, tol);
        const Realization& r = doc.realization;
        report["command"] = app.get_subcommands().front()->get_name();
        report["inputs_digest"] = digest(document_to_json(doc));
        report["seed"] = opt.seed;
        report["tolerance"] = {{"relative_eps", tol.relative_eps},
                               {"sign_eps", tol.sign_eps},
                               {"condition_cap", tol.condition_cap}};
        json& outputs = report["outputs"] = json::object();

        if (c_validate->parsed()) {
            outputs["state_dim"] = r.state_dim();
            outputs["hilbert_dim"] = r.hilbert_dim();
            outputs["negative_index"] = r.sym.negative_index;
            outputs["holomorphic_at_infinity"] = !r.s.has_value();
        } else if (c_eval->parsed()) {
            const cplx z = parse_complex(z_text);
            outputs["z"] = complex_to_json(z);
            outputs["Q"] = matrix_to_json(evaluate(r, z, tol));
        } else if (c_qpinf->parsed()) {
            outputs["Q_prime_infinity"] = matrix_to_json(derivative_at_infinity(r));
        } else if (c_minimal->parsed()) {
            const Minimality m = minimality(r, tol);
            outputs["is_minimal"] = m.is_minimal;
            outputs["reachable_rank"] = m.reachable_basis.cols();
        } else if (c_invert->parsed()) {
            const cplx z = parse_complex(z_text);
            outputs["z"] = complex_to_json(z);
            outputs["Q_hat"] = matrix_to_json(invert_at(r, z, tol));
        } else if (c_decompose->parsed() || c_indices->parsed()) {
            const InverseDecomposition dec = decompose_inverse(r, tol);
            outputs["kappa"] = dec.kappa;
            outputs["kappa1"] = dec.kappa1;
            outputs["kappa2"] = dec.kappa2;
            outputs["minimal_input"] = dec.minimal_input;
            if (!dec.minimal_input)
                outputs["warning"] = "input not minimal; kappa from J is only an upper bound";
            if (c_decompose->parsed()) {
                outputs["S_hat"] = matrix_to_json(dec.s_hat);
                outputs["G_hat"] = matrix_to_json(dec.g_hat);
                outputs["Gamma_tilde"] = matrix_to_json(dec.gamma_tilde);
                outputs["A_tilde_coord"] = matrix_to_json(dec.a_tilde_coord);
                outputs["resolvent_dim"] = dec.range_ip_basis.cols();
            }
        } else if (c_zeros->parsed()) {
            json zeros = json::array();
            for (const auto& [z, mult] : zeros_of_q(r, tol))
                zeros.push_back({{"z", complex_to_json(z)}, {"multiplicity", mult}});
            outputs["zeros"] = std::move(zeros);
        } else if (c_split->parsed()) {
            const cplx alpha = parse_complex(alpha_text);
            const PoleSplit split = split_at_pole(r, alpha, tol);
            outputs["alpha"] = complex_to_json(alpha);
            outputs["Q_alpha"] =
                document_to_json({doc.schema_version, split.r_alpha, json::object()});
            outputs["H_alpha"] =
                document_to_json({doc.schema_version, split.h_alpha, json::object()});
        } else if (c_verify->parsed()) {
            SamplePlan plan;
            plan.count = 10;
            plan.seed = opt.seed;
            const double sym_res = check_symmetry(r, plan, tol);
            double id46 = 0.0, product_res = 0.0;
            double qnorm = 1.0;
            for (const cplx& z : default_sample_points(r, 5, opt.seed)) {
                id46 = std::max(id46, verify_identity_46(r, z, tol));
                const Matrix q = evaluate(r, z, tol);
                const Matrix qh = invert_at(r, z, tol);
                const std::size_t m = r.hilbert_dim();
                product_res = std::max(product_res,
                                       (q * qh + Matrix::identity(m)).norm_fro());
                qnorm = std::max(qnorm, q.norm_fro());
            }
            const Matrix mv = inverse_relation_multivalued_part(r, cplx{0.0, 1.0}, tol);
            const Matrix range_gamma = rank_and_range(r.gamma, tol).range_basis;
            const double gap54 = subspace_gap(mv, range_gamma);
            outputs["symmetry_residual"] = sym_res;
            outputs["identity_46_residual"] = id46;
            outputs["identity_54_gap"] = gap54;
            outputs["inverse_product_residual"] = product_res;
            outputs["thresholds"] = {{"symmetry", 1e-10 * (1.0 + qnorm)},
                                     {"identity_46", 1e-8},
                                     {"identity_54", 1e-7},
                                     {"inverse_product", 1e-8 * qnorm}};
            const bool pass = sym_res <= 1e-10 * (1.0 + qnorm) && id46 <= 1e-8 &&
                              gap54 <= 1e-7 && product_res <= 1e-8 * qnorm;
            outputs["pass"] = pass;
            if (!pass) exit_code = kExitNumerical;
        } else if (c_kernel->parsed()) {
            SamplePlan plan;
            plan.count = kernel_samples;
            plan.seed = opt.seed;
            const auto est = estimate_negative_squares(r, plan, kernel_directions, tol);
            outputs["kappa_lower"] = est.kappa_lower;
            outputs["history"] = est.history;
            outputs["negative_index_J"] = r.sym.negative_index;
        }
    } catch (const ValidationError& e) {
        err << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const AssumptionError& e) {
        err << "assumption violated: " << e.what() << "\n";
        return kExitAssumption;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }

    if (opt.format == "json") {
        out << report.dump(2) << "\n";
    } else {
        detail::print_json_as_text(out, report);
    }
    return exit_code;
}

}  // namespace nev::cli
