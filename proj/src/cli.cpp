#include "susyq/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "susyq/gk.hpp"
#include "susyq/model_checks.hpp"
#include "susyq/models.hpp"
#include "susyq/numerics.hpp"
#include "susyq/susy.hpp"

namespace susyq::cli {

namespace {

using nlohmann::json;

json number(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

json number(cplx v) { return json::array({number(v.real()), number(v.imag())}); }

/// Raw flags as given; unset optionals fall back to the config file.
struct Flags {
    std::optional<std::string> model, wA, wB, config, out, format, family, energies;
    std::vector<std::string> bind;
    std::optional<double> L, J, gamma, J_max, v0;
    std::optional<std::size_t> N;
    std::optional<int> sector;
    std::vector<double> r_values;
    bool allow_shifted = false, no_gk = false;
};

template <class T>
void take(std::optional<T>& dst, const json& cfg, const char* key) {
    if (!dst && cfg.contains(key)) dst = cfg.at(key).get<T>();
}

RunConfig resolve(const std::string& command, Flags f) {
    json cfg = json::object();
    if (f.config) {
        std::ifstream in(*f.config);
        if (!in) throw ConfigError("cannot open config file " + *f.config);
        try {
            in >> cfg;
        } catch (const json::exception& e) {
            throw ConfigError("config file " + *f.config + ": " + e.what());
        }
        if (!cfg.is_object()) throw ConfigError("config file must hold a JSON object");
    }
    RunConfig c;
    c.command = command;
    try {
        take(f.model, cfg, "model");
        take(f.wA, cfg, "wA");
        take(f.wB, cfg, "wB");
        take(f.out, cfg, "out");
        take(f.format, cfg, "format");
        take(f.family, cfg, "family");
        take(f.energies, cfg, "energies");
        take(f.J, cfg, "J");
        take(f.gamma, cfg, "gamma");
        take(f.J_max, cfg, "J_max");
        take(f.v0, cfg, "v0");
        take(f.sector, cfg, "sector");
        if (cfg.contains("grid")) {
            take(f.L, cfg.at("grid"), "L");
            if (!f.N && !std::getenv("SUSYQ_GRID_N")) take(f.N, cfg.at("grid"), "N");
        }
        if (f.r_values.empty() && cfg.contains("r")) f.r_values = cfg.at("r").get<std::vector<double>>();
        if (cfg.contains("bindings")) c.bindings = bindings_from_json(cfg.at("bindings"));
        if (cfg.contains("allow_shifted")) f.allow_shifted = f.allow_shifted || cfg.at("allow_shifted").get<bool>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config file: ") + e.what());
    } catch (const ExprError& e) {
        throw ConfigError(std::string("config file: ") + e.what());
    }
    for (const auto& b : f.bind) {
        const auto [name, value] = parse_binding(b);
        c.bindings[name] = value;
    }

    if (!f.N) {
        if (const char* env = std::getenv("SUSYQ_GRID_N")) {
            char* end = nullptr;
            const long long v = std::strtoll(env, &end, 10);
            if (end == env || *end != '\0' || v < 16) throw ConfigError("SUSYQ_GRID_N must be an integer >= 16");
            f.N = static_cast<std::size_t>(v);
        }
    }
    c.model = f.model;
    c.wA = f.wA;
    c.wB = f.wB;
    c.out_dir = f.out;
    if (f.L) c.L = *f.L;
    if (f.N) c.N = *f.N;
    if (!(c.L > 0.0) || c.N < 16) throw ConfigError("grid needs L > 0 and N >= 16");
    if (f.format) c.format = *f.format;
    else if (c.command == "potentials") c.format = "csv";
    if (c.format != "json" && c.format != "csv") throw ConfigError("format must be csv or json");
    if (f.J) c.J = *f.J;
    if (f.gamma) c.gamma = *f.gamma;
    if (f.family) c.family = *f.family;
    if (c.family != "phi" && c.family != "psi" && c.family != "both") throw ConfigError("family must be phi, psi or both");
    if (f.sector) c.sector = *f.sector;
    if (c.sector != 1 && c.sector != 2) throw ConfigError("sector must be 1 or 2");
    c.energies = f.energies;
    c.J_max = f.J_max;
    c.allow_shifted = f.allow_shifted;
    if (!f.r_values.empty()) c.r_values = f.r_values;
    if (f.v0) c.v0 = *f.v0;
    c.gk_checks = !f.no_gk;
    if (c.model) {
        const auto names = model_names();
        if (std::find(names.begin(), names.end(), *c.model) == names.end())
            throw ConfigError("unknown model '" + *c.model + "'");
    }
    return c;
}

/// Writes to <out>/<name> when --out is set, otherwise to the stream.
class Sink {
public:
    Sink(const RunConfig& c, std::ostream& out) : dir_(c.out_dir), out_(out) {
        if (dir_) std::filesystem::create_directories(*dir_);
    }

    void write(const std::string& name, const std::string& content, bool primary = true) {
        if (dir_) {
            const auto path = std::filesystem::path(*dir_) / name;
            std::ofstream f(path, std::ios::binary);
            if (!f) throw ConfigError("cannot write " + path.string());
            f << content;
            out_ << path.string() << '\n';
        } else if (primary) {
            out_ << content;
        }
    }

private:
    std::optional<std::string> dir_;
    std::ostream& out_;
};

struct Setup {
    std::optional<ModelRecord> model;
    SuperpotentialPair pair;
    std::optional<Antiderivatives> antiderivatives;
    Normalization policy = Normalization::unit_l2;
    std::vector<std::string> notes;
};

Setup setup(const RunConfig& c) {
    Setup s;
    try {
        if (c.model) {
            s.model = make_model(*c.model, c.bindings);
            s.pair = s.model->pair;
            s.antiderivatives = s.model->antiderivatives;
            s.policy = s.model->vacuum_normalization;
        } else if (!c.wA || !c.wB) {
            throw ConfigError("give --model or both --wA and --wB");
        }
        if (c.wA || c.wB) {
            const Expr wA = c.wA ? parse(*c.wA, c.bindings) : s.pair.wA;
            const Expr wB = c.wB ? parse(*c.wB, c.bindings) : s.pair.wB;
            s.pair = build_pair(wA, wB);
            s.antiderivatives.reset();
            if (s.model) {
                s.model->pair = s.pair;
                s.model->antiderivatives.reset();
                s.notes.push_back("superpotentials overridden: wA = " + wA.str() + ", wB = " + wB.str() +
                                  "; eigendata still taken from model " + s.model->name);
            }
        }
    } catch (const ModelError& e) {
        throw ConfigError(e.what());
    } catch (const ExprError& e) {
        throw ConfigError(e.what());
    }
    return s;
}

json grid_json(const Grid& g) { return {{"L", g.half_width()}, {"N", g.size()}}; }

json config_json(const RunConfig& c) {
    json j;
    j["command"] = c.command;
    if (c.model) j["model"] = *c.model;
    if (c.wA) j["wA"] = *c.wA;
    if (c.wB) j["wB"] = *c.wB;
    json b = json::object();
    for (const auto& [k, v] : c.bindings) b[k] = v.imag() == 0.0 ? json(v.real()) : number(v);
    j["bindings"] = b;
    j["grid"] = {{"L", c.L}, {"N", c.N}};
    return j;
}

std::vector<double> singular_of(const Setup& s) {
    return s.antiderivatives ? s.antiderivatives->singular_points : std::vector<double>{};
}

// ---------------------------------------------------------------------------
// commands

int cmd_potentials(const RunConfig& c, std::ostream& out, std::ostream&) {
    const Setup s = setup(c);
    const Grid g(c.L, c.N);
    const SampledPair p(s.pair, g);
    const std::vector<std::pair<std::string, const GridFunction*>> cols = {
        {"q1", &p.q1}, {"V1", &p.V1}, {"V2", &p.V2}, {"V1adj", &p.V1_adj}, {"V2adj", &p.V2_adj}};
    const auto singular = singular_of(s);
    Sink sink(c, out);
    std::ostringstream os;
    if (c.format == "csv") {
        json meta = grid_json(g);
        meta["singular_points"] = singular;
        os << "# " << meta.dump() << '\n' << "x";
        for (const auto& [name, f] : cols) os << ',' << name << "_re," << name << "_im";
        os << '\n';
        for (std::size_t j = 0; j < g.size(); ++j) {
            os << format_number(g.x(j));
            for (const auto& [name, f] : cols)
                os << ',' << format_number((*f)[j].real()) << ',' << format_number((*f)[j].imag());
            os << '\n';
        }
        sink.write("potentials.csv", os.str());
    } else {
        json j = config_json(c);
        j["singular_points"] = singular;
        j["x"] = g.points();
        for (const auto& [name, f] : cols) {
            json a = json::array();
            for (std::size_t k = 0; k < g.size(); ++k) a.push_back(number((*f)[k]));
            j[name] = a;
        }
        sink.write("potentials.json", j.dump(2) + "\n");
    }
    return ok;
}

int cmd_vacua(const RunConfig& c, std::ostream& out, std::ostream&) {
    const Setup s = setup(c);
    const Grid g(c.L, c.N);
    const Vacua v = vacua(s.pair, g, s.policy, s.antiderivatives);
    json summary = config_json(c);
    summary["vacua"] = json::array();
    for (std::size_t i = 0; i < 4; ++i) {
        const Vacuum& w = v[i];
        summary["vacua"].push_back({{"name", w.name},
                                    {"exponent_left", number(w.exponent_left)},
                                    {"exponent_right", number(w.exponent_right)},
                                    {"in_l2", w.in_l2},
                                    {"finite_on_grid", w.finite_on_grid},
                                    {"interior_singularity", w.interior_singularity},
                                    {"residual", number(w.residual)}});
    }
    summary["notes"] = v.notes;
    Sink sink(c, out);
    if (c.format == "json") {
        sink.write("vacua.json", summary.dump(2) + "\n");
        return ok;
    }
    std::ostringstream os;
    os << "# " << grid_json(g).dump() << '\n' << "x";
    for (std::size_t i = 0; i < 4; ++i) os << ',' << v[i].name << "_logabs," << v[i].name << "_arg";
    os << '\n';
    for (std::size_t j = 0; j < g.size(); ++j) {
        os << format_number(g.x(j));
        for (std::size_t i = 0; i < 4; ++i) {
            const ScaledFunction& f = v[i].f;
            const double la = f.log_abs(j);
            const double arg = std::arg(f.mantissa()[j]) + f.log_scale()[j].imag();
            os << ',' << (std::isfinite(la) ? format_number(la) : std::string(la > 0 ? "inf" : "-inf")) << ','
               << format_number(std::remainder(arg, 2 * M_PI));
        }
        os << '\n';
    }
    sink.write("vacua.csv", os.str());
    sink.write("vacua.json", summary.dump(2) + "\n", false);
    return ok;
}

int cmd_verify(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const Setup s = setup(c);
    const Grid g(c.L, c.N);
    Report r = s.model ? verify_model(*s.model, g, VerifyOptions{c.gk_checks})
                       : verify_pair(s.pair, g, s.antiderivatives, s.policy);
    for (const auto& n : s.notes) r.note(n);
    json j = config_json(c);
    j["report"] = r.to_json();
    Sink sink(c, out);
    if (c.format == "json") {
        sink.write("verify_report.json", j.dump(2) + "\n");
    } else {
        std::ostringstream os;
        os << "check,residual,tolerance,pass\n";
        for (const auto& ch : r.checks())
            os << '"' << ch.name << "\"," << format_number(ch.residual) << ',' << format_number(ch.tolerance) << ','
               << (ch.pass ? "true" : "false") << '\n';
        sink.write("verify_report.csv", os.str());
    }
    for (const auto& ch : r.checks())
        if (!ch.pass)
            err << "FAIL " << ch.name << ": residual " << format_number(ch.residual) << " > "
                << format_number(ch.tolerance) << '\n';
    return r.all_pass() ? ok : check_failed;
}

int cmd_gk(const RunConfig& c, std::ostream& out, std::ostream& err) {
    std::optional<Setup> s;
    if (c.model || c.wA || c.wB) s = setup(c);
    const Grid g(c.L, c.N);

    std::function<cplx(std::size_t)> E;
    FamilyGenerator phi_gen, psi_gen;
    std::size_t norm_count = 0;
    if (c.energies) {
        Expr e;
        try {
            e = parse(*c.energies, c.bindings);
        } catch (const ExprError& ex) {
            throw ConfigError(std::string("--energies: ") + ex.what());
        }
        E = [e](std::size_t n) { return e(static_cast<double>(n)); };
    }
    if (s && s->model && s->model->has_eigendata()) {
        const ModelRecord& m = *s->model;
        if (c.sector == 2 && m.sector2_shifted) {
            if (!c.allow_shifted)
                throw ConfigError("sector-2 spectrum of " + m.name +
                                  " is shifted (E_0 != 0); pass --allow-shifted to build these states anyway");
            err << "warning: sector-2 states of " << m.name
                << " use the shifted spectrum; normalization and action identity results do not carry over\n";
        }
        if (!E) E = c.sector == 1 ? (m.gk_energy1 ? m.gk_energy1 : m.energy1) : m.energy2;
        phi_gen = c.sector == 1 ? m.phi1 : m.phi2;
        psi_gen = c.sector == 1 ? m.psi1 : m.psi2;
        norm_count = m.eigen_count;
    }
    if (!E) throw ConfigError("gk needs --energies or a model with eigendata");

    Spectrum spec = [&] {
        try {
            return Spectrum::from_formula(E, 2000);
        } catch (const GKError& ex) {
            throw ConfigError(ex.what());
        }
    }();

    // growth constants from the basis norms
    std::vector<double> phi_norms, psi_norms;
    bool psi_ok = static_cast<bool>(psi_gen);
    for (std::size_t n = 0; n < norm_count; ++n) {
        phi_norms.push_back(norm(phi_gen(n, g)));
        const ScaledFunction ps = psi_gen(n, g);
        if (!ps.representable()) psi_ok = false;
        if (psi_ok) psi_norms.push_back(norm(ps));
    }
    if (!psi_ok) psi_norms.clear();
    const GKDomain dom = susyq::gk_domain(spec, phi_norms, psi_norms);
    for (const auto& d : dom.diagnostics) err << "gk: " << d << '\n';
    dom.require(c.J);

    const GKState phi = build_state(spec, dom, Family::phi, c.sector, c.J, c.gamma);
    const GKState psi = build_state(spec, dom, Family::psi, c.sector, c.J, c.gamma);

    std::vector<GridFunction> phi_b, psi_b;
    if (phi_gen && psi_ok) {
        const std::size_t N = std::max<std::size_t>({phi.N, psi.N, 12});
        for (std::size_t n = 0; n < N; ++n) {
            phi_b.push_back(generate(phi_gen, n, g));
            psi_b.push_back(generate(psi_gen, n, g));
        }
    }

    json rep = config_json(c);
    rep["J"] = c.J;
    rep["gamma"] = c.gamma;
    rep["sector"] = c.sector;
    rep["spectrum"] = {{"E_0", number(spec.E(0))}, {"E_1", number(spec.E(1))}, {"R", number(spec.R())},
                       {"R_stable", spec.R_stable()}, {"multiplicity_one", spec.multiplicity_one()}};
    rep["domain"] = {{"R", number(dom.R)},         {"A_phi", number(dom.A_phi)}, {"r_phi", number(dom.r_phi)},
                     {"A_psi", number(dom.A_psi)}, {"r_psi", number(dom.r_psi)}, {"J_phi", number(dom.J_phi)},
                     {"J_psi", number(dom.J_psi)}, {"J_min", number(dom.J_min)}, {"delta_E_ok", dom.delta_E_ok},
                     {"diagnostics", dom.diagnostics}};

    const PairNorm pn = phi_b.empty() ? pair_norm(phi, psi) : pair_norm(phi, psi, phi_b, psi_b);
    rep["pair_norm"] = {{"coefficient", number(pn.coefficient)}};
    if (pn.quadrature) rep["pair_norm"]["quadrature"] = number(*pn.quadrature);

    try {
        ActionResult a;
        if (!phi_b.empty() && s) {
            const SampledPair sp(s->pair, g);
            const auto H = [&](const GridFunction& f) { return c.sector == 1 ? apply_H1(sp, f) : apply_H2(sp, f); };
            a = action_identity(phi, psi, spec, phi_b, psi_b, H);
        } else {
            a = action_identity(phi, psi, spec);
        }
        rep["action_identity"] = {{"coefficient", number(a.coefficient)}};
        if (a.quadrature) rep["action_identity"]["quadrature"] = number(*a.quadrature);
    } catch (const GKError& ex) {
        rep["action_identity"] = {{"not_applicable", ex.what()}};
    }
    rep["lowering_residual"] = number(lowering_eigen_residual(spec, phi));
    rep["evolve_mismatch"] = number(evolve(phi, spec, 0.7).mismatch);

    Sink sink(c, out);
    if (c.family != "psi") sink.write("gk_state_phi.json", phi.to_json().dump(2) + "\n", false);
    if (c.family != "phi") sink.write("gk_state_psi.json", psi.to_json().dump(2) + "\n", false);
    if (c.family != "psi") rep["state_phi"] = phi.to_json();
    if (c.family != "phi") rep["state_psi"] = psi.to_json();

    const double curve_max = c.J_max ? *c.J_max : std::min(10.0, std::isfinite(dom.R) ? 0.9 * dom.R : 10.0);
    std::ostringstream kc;
    write_K_curve_csv(kc, spec, curve_max, 201);
    sink.write("K_curve.csv", kc.str(), false);

    std::string diag;
    const auto density = moment_density(spec, &diag);
    if (density && !phi_b.empty()) {
        rep["moment_density"] = density->tag;
        const GridFunction f = phi_b[0] + 0.5 * phi_b[1];
        const double gap = std::abs(spec.E(1) - spec.E(0));
        const double J_res = c.J_max ? *c.J_max : 40.0 * gap;
        std::vector<std::tuple<double, double, std::size_t>> schedule;
        for (double G : {25.0, 50.0, 100.0, 200.0}) schedule.emplace_back(G, J_res, 12);
        const ResolutionTrace t = resolution_estimate(f, f, phi_b, psi_b, spec, *density, schedule);
        std::ostringstream tc;
        write_trace_csv(tc, t);
        sink.write("resolution_trace.csv", tc.str(), false);
        rep["resolution"] = {{"final_error", number(t.points.back().error)}, {"flags", t.flags}};
        if (std::isfinite(dom.J_min))
            rep["resolution"]["flags"].push_back("finite J_min: the registry density is integrated to J_max only");
    } else {
        rep["moment_density"] = density ? json(density->tag) : json(diag);
    }
    sink.write("gk_report.json", rep.dump(2) + "\n");
    return ok;
}

int cmd_bs_classify(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const Grid g(c.L, c.N);
    bool all_agree = true;
    json rows = json::array();
    std::ostringstream os;
    os << "r,analytic,numeric,agree\n";
    for (double r : c.r_values) {
        BsClassificationRow row;
        try {
            row = bs_classify(r, c.v0, g);
        } catch (const ModelError& e) {
            throw ConfigError(e.what());
        }
        all_agree = all_agree && row.agree;
        rows.push_back({{"r", r},
                        {"analytic", row.analytic.str()},
                        {"numeric", row.numeric.str()},
                        {"agree", row.agree},
                        {"notes", row.notes}});
        os << format_number(r) << ",\"" << row.analytic.str() << "\",\"" << row.numeric.str() << "\","
           << (row.agree ? "true" : "false") << '\n';
        if (!row.agree) err << "classification mismatch at r = " << format_number(r) << '\n';
    }
    Sink sink(c, out);
    if (c.format == "csv")
        sink.write("bs_classification.csv", os.str());
    else
        sink.write("bs_classification.json", json{{"v0", c.v0}, {"grid", {{"L", c.L}, {"N", c.N}}}, {"rows", rows}}.dump(2) + "\n");
    return all_agree ? ok : check_failed;
}

int cmd_models_list(const RunConfig& c, std::ostream& out, std::ostream&) {
    json j = json::array();
    for (const auto& n : model_names()) j.push_back(model_schema(n));
    Sink sink(c, out);
    sink.write("models.json", j.dump(2) + "\n");
    return ok;
}

void common_options(CLI::App* sub, Flags& f) {
    sub->add_option("--model", f.model, "registered model name (see models-list)");
    sub->add_option("--bind", f.bind, "parameter binding name=value or name=re,im")->expected(1, -1);
    sub->add_option("--wA", f.wA, "superpotential wA(x)");
    sub->add_option("--wB", f.wB, "superpotential wB(x)");
    sub->add_option("--L", f.L, "grid half-width");
    sub->add_option("--N", f.N, "grid point count");
    sub->add_option("--out", f.out, "output directory (default: primary output to stdout)");
    sub->add_option("--format", f.format, "csv or json");
    sub->add_option("--config", f.config, "JSON config file; flags win");
}

}  // namespace

std::pair<std::string, cplx> parse_binding(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("binding '" + text + "' must look like name=value");
    const std::string name = text.substr(0, eq), value = text.substr(eq + 1);
    const auto to_double = [&](const std::string& s) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != s.size()) throw ConfigError("binding '" + text + "' has a non-numeric value");
        return v;
    };
    const auto comma = value.find(',');
    if (comma == std::string::npos) return {name, cplx(to_double(value), 0.0)};
    return {name, cplx(to_double(value.substr(0, comma)), to_double(value.substr(comma + 1)))};
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Non-Hermitian supersymmetric factorizations: potentials, vacua, checks and bicoherent states"};
    app.require_subcommand(1);
    Flags f;

    auto* pot = app.add_subcommand("potentials", "q1, V1, V2 and the adjoint potentials on the grid");
    auto* vac = app.add_subcommand("vacua", "the four vacua with asymptotic classification");
    auto* ver = app.add_subcommand("verify", "run every applicable check; exit 1 on failure");
    auto* gk = app.add_subcommand("gk", "Gazeau-Klauder bicoherent states");
    auto* bs = app.add_subcommand("bs-classify", "Black-Scholes vacuum classification table");
    auto* ml = app.add_subcommand("models-list", "registered models with parameter schemas");
    for (auto* sub : {pot, vac, ver, gk, bs, ml}) common_options(sub, f);
    ver->add_flag("--no-gk", f.no_gk, "skip the GK part of the suite");
    gk->add_option("--J", f.J, "action variable J");
    gk->add_option("--gamma", f.gamma, "angle variable gamma");
    gk->add_option("--family", f.family, "phi, psi or both");
    gk->add_option("--sector", f.sector, "1 or 2");
    gk->add_option("--energies", f.energies, "E_n as an expression in x = n");
    gk->add_option("--Jmax", f.J_max, "upper J for the K curve and the resolution trace");
    gk->add_flag("--allow-shifted", f.allow_shifted, "build sector-2 states on a shifted spectrum");
    bs->add_option("--r", f.r_values, "values of r")->expected(1, -1);
    bs->add_option("--v0", f.v0, "integration constant v0 > 0");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return config_error;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        const RunConfig c = resolve(command, f);
        if (command == "potentials") return cmd_potentials(c, out, err);
        if (command == "vacua") return cmd_vacua(c, out, err);
        if (command == "verify") return cmd_verify(c, out, err);
        if (command == "gk") return cmd_gk(c, out, err);
        if (command == "bs-classify") return cmd_bs_classify(c, out, err);
        return cmd_models_list(c, out, err);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return config_error;
    } catch (const PoleOnGridError& e) {
        err << "pole on grid: " << e.what() << '\n';
        return pole_on_grid;
    } catch (const GKDomainError& e) {
        err << "GK domain: " << e.what() << '\n';
        return gk_domain;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return check_failed;
    }
}

int run(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, std::cout, std::cerr);
}

}  // namespace susyq::cli
