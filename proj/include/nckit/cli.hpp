#pragma once

// Command-line front end. Every run writes one JSON report to `out` and a
// short human summary to `err`. Scalar commands (lp-norm, orlicz-norm,
// bool lp-norm) print the bare number unless --json is given.
//
// Exit codes: 0 success, 1 input or validation error, 2 numerical
// non-convergence, 3 mathematical precondition violated, 4 a requested check
// ran and failed.

#include <chrono>
#include <cstdint>
#include <functional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nckit/algebra.hpp"
#include "nckit/boolean_lp.hpp"
#include "nckit/io.hpp"
#include "nckit/modular.hpp"
#include "nckit/nc_lp.hpp"
#include "nckit/orlicz.hpp"
#include "nckit/states.hpp"
#include "nckit/verify.hpp"

namespace nckit::cli {

using json = nlohmann::json;

enum ExitCode : int { kOk = 0, kInputError = 1, kNoConvergence = 2, kPrecondition = 3, kCheckFailed = 4 };

inline int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::NoConvergence: return kNoConvergence;
    case ErrorKind::NotFaithful:
    case ErrorKind::NoncommutingSupports:
    case ErrorKind::SupportViolation:
    case ErrorKind::NotAbsolutelyContinuous: return kPrecondition;
    default: return kInputError;
  }
}

struct Common {
  double tol_spec = 1e-10;
  double tol_supp = 1e-10;
  std::uint64_t seed = 1;
  int trials = 50;
  std::string trace = "can";
  bool json_output = false;

  Tolerances tolerances() const { return {tol_spec, tol_supp, Tolerances{}.cluster}; }
};

inline double parse_real(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::logic_error&) {
    throw Error(ErrorKind::InvalidInput, std::string("cannot parse ") + what + " \"" + s + "\"");
  }
}

inline std::vector<double> parse_reals(const std::string& s, const char* what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(parse_real(tok, what));
  return out;
}

/// "re,im" or a bare real.
inline Complex parse_complex(const std::string& s) {
  const auto v = parse_reals(s, "complex number");
  if (v.size() == 1) return {v[0], 0.0};
  if (v.size() == 2) return {v[0], v[1]};
  throw Error(ErrorKind::InvalidInput, "complex numbers are written re,im");
}

inline json report_json(const CheckReport& r) {
  json samples = json::array();
  for (const auto& s : r.samples) samples.push_back({{"t", s.t}, {"residual", s.residual}});
  return {{"pass", r.pass}, {"max_residual", r.max_residual}, {"tolerance", r.tolerance}, {"samples", samples}};
}

inline json reals_json(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(io::number_to_json(x));
  return a;
}

/// State shared by one invocation: loaded inputs, outputs, verdicts.
class Run {
 public:
  Run(std::string command, std::vector<std::string> argv, const Common& common)
      : command_(std::move(command)), argv_(std::move(argv)), common_(common) {}

  json load(const std::string& path) {
    auto text = io::read_file(path);
    auto j = io::parse(text, path);
    inputs_.push_back(std::move(text));
    return j;
  }

  AlgebraElement element(const std::string& path) { return io::element_from_json(load(path)); }
  StateDensity state(const std::string& path) { return io::state_from_json(load(path), tol()); }

  Tolerances tol() const { return common_.tolerances(); }
  TraceSpec trace(const MatrixAlgebra& a) const { return TraceSpec::of(io::flavor_from_string(common_.trace), a); }
  const Common& common() const { return common_; }

  json& outputs() { return outputs_; }
  void verdict(const std::string& name, bool pass, double residual, double tolerance) {
    verdicts_.push_back({{"name", name}, {"pass", pass}, {"residual", residual}, {"tolerance", tolerance}});
  }
  bool all_pass() const {
    for (const auto& v : verdicts_)
      if (!v["pass"].get<bool>()) return false;
    return true;
  }

  void summary(std::string line) { summary_.push_back(std::move(line)); }
  const std::vector<std::string>& summary_lines() const { return summary_; }

  json report(double seconds, const json& error = nullptr) const {
    json r{{"command", command_},
           {"argv", argv_},
           {"inputs_digest", io::digest(inputs_)},
           {"seed", common_.seed},
           {"outputs", outputs_},
           {"verdicts", verdicts_},
           {"timing", {{"wall_seconds", seconds}}}};
    if (!error.is_null()) r["error"] = error;
    return r;
  }

 private:
  std::string command_;
  std::vector<std::string> argv_;
  Common common_;
  std::vector<std::string> inputs_;
  json outputs_ = json::object();
  json verdicts_ = json::array();
  std::vector<std::string> summary_;
};

inline json algebra_summary(const MatrixAlgebra& a) {
  json factors = json::array();
  for (const auto& f : center_and_classify(a)) factors.push_back(f.label);
  return {{"algebra", io::algebra_to_json(a)},
          {"hilbert_dim", a.hilbert_dim()},
          {"linear_dim", a.linear_dim()},
          {"commutative", a.is_commutative()},
          {"factors", factors}};
}

inline std::vector<double> fvector(const json& j) {
  if (!j.is_object() || !j.contains("f")) throw Error(ErrorKind::InvalidInput, "function file needs \"f\"");
  return io::reals_from_json(j["f"]);
}

/// Parses argv and runs one subcommand. Returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  Common common;
  CLI::App app{"Finite-dimensional modular theory, noncommutative Lp and Orlicz spaces", "nckit"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--tol-spec", common.tol_spec, "spectral tolerance (relative)");
  app.add_option("--tol-supp", common.tol_supp, "support tolerance (relative)");
  app.add_option("--seed", common.seed, "random seed");
  app.add_option("--trials", common.trials, "number of random trials");
  app.add_option("--trace", common.trace, "trace flavour")->check(CLI::IsMember({"can", "rep"}));
  app.add_flag("--json", common.json_output, "full JSON report for scalar commands");

  std::vector<std::string> args(argv + 1, argv + argc);
  std::string chosen;
  std::function<int(Run&)> action;
  auto sub = [&](const char* name, const char* help) {
    auto* s = app.add_subcommand(name, help);
    s->callback([&chosen, name] { chosen = name; });
    return s;
  };

  // --- info
  std::string f1, f2, f3;
  auto* info = sub("info", "describe an algebra, element or state file");
  info->add_option("file", f1)->required();

  auto* gns_cmd = sub("gns", "GNS representation of a state");
  gns_cmd->add_option("state", f1)->required();

  bool no_reduce = false;
  auto* modular_cmd = sub("modular", "modular operator of a state");
  modular_cmd->add_option("state", f1)->required();
  modular_cmd->add_flag("--no-reduce", no_reduce, "fail on non-faithful states instead of reducing");

  double t = 0.0;
  auto* flow_cmd = sub("flow", "modular flow σ_t(x)");
  flow_cmd->add_option("state", f1)->required();
  flow_cmd->add_option("element", f2)->required();
  flow_cmd->add_option("--t", t)->required();

  auto* cocycle_cmd = sub("cocycle", "Connes cocycle (Dφ:Dψ)_t");
  cocycle_cmd->add_option("phi", f1)->required();
  cocycle_cmd->add_option("psi", f2)->required();
  cocycle_cmd->add_option("--t", t)->required();

  std::string z = "0,-0.5";
  auto* analytic_cmd = sub("cocycle-analytic", "analytic continuation of the Connes cocycle");
  analytic_cmd->add_option("phi", f1)->required();
  analytic_cmd->add_option("psi", f2)->required();
  analytic_cmd->add_option("--z", z, "complex argument re,im with -1/2 <= im <= 0");

  std::string hamiltonian, times = "-1,-0.3,0,0.7,2";
  double beta = 1.0, rel_tol = 1e-8;
  auto* kms_cmd = sub("kms-check", "KMS boundary condition");
  kms_cmd->add_option("state", f1)->required();
  kms_cmd->add_option("x", f2)->required();
  kms_cmd->add_option("y", f3)->required();
  kms_cmd->add_option("--hamiltonian", hamiltonian, "element file H; default -log h");
  kms_cmd->add_option("--beta", beta);
  kms_cmd->add_option("--times", times, "comma separated t values");
  kms_cmd->add_option("--rel-tol", rel_tol);

  auto* pt_cmd = sub("pt-density", "Pedersen–Takesaki density of ψ relative to φ");
  pt_cmd->add_option("psi", f1)->required();
  pt_cmd->add_option("phi", f2)->required();

  auto* rn_cmd = sub("rn-density", "density of a state relative to the chosen trace");
  rn_cmd->add_option("state", f1)->required();

  auto* liou_cmd = sub("liouvillean", "standard liouvillean of a hamiltonian");
  liou_cmd->add_option("hamiltonian", f1)->required();

  std::string p_text;
  auto* lp_cmd = sub("lp-norm", "trace Lp norm");
  lp_cmd->add_option("element", f1)->required();
  lp_cmd->add_option("--p", p_text)->required();

  std::string orlicz_file;
  auto* orlicz_cmd = sub("orlicz-norm", "Luxemburg norm");
  orlicz_cmd->add_option("element", f1)->required();
  orlicz_cmd->add_option("--orlicz", orlicz_file)->required();

  auto* rearrange_cmd = sub("rearrange", "generalised singular value function");
  rearrange_cmd->add_option("element", f1)->required();

  auto* commutant_cmd = sub("commutant", "commutant of an algebra or of a generator list");
  commutant_cmd->add_option("file", f1)->required();

  auto* classify_cmd = sub("classify", "centre and factor decomposition");
  classify_cmd->add_option("file", f1)->required();

  auto* condexp_cmd = sub("cond-exp", "pinching conditional expectation");
  condexp_cmd->add_option("element", f1)->required();
  condexp_cmd->add_option("partition", f2)->required();

  auto* bool_cmd = app.add_subcommand("bool", "finite boolean algebras and canonical Lp");
  bool_cmd->require_subcommand(1);
  auto bsub = [&](const char* name, const char* tag, const char* help) {
    auto* s = bool_cmd->add_subcommand(name, help);
    s->callback([&chosen, tag] { chosen = tag; });
    return s;
  };
  auto* bspec = bsub("spectrum", "bool spectrum", "Stone spectrum");
  bspec->add_option("boolean", f1)->required();
  auto* brn = bsub("rn", "bool rn", "Radon–Nikodým quotient μ2/μ1");
  brn->add_option("mu2", f1)->required();
  brn->add_option("mu1", f2)->required();
  auto* blp = bsub("lp-norm", "bool lp-norm", "Lp norm of a function on atoms");
  blp->add_option("function", f1)->required();
  blp->add_option("measure", f2)->required();
  blp->add_option("--p", p_text)->required();
  std::string op, ref_file;
  double lambda = 1.0;
  auto* bcan = bsub("canonical", "bool canonical", "canonical Lp classes");
  bcan->add_option("op", op)->required()->check(
      CLI::IsMember({"add", "meet", "join", "multiply", "scale", "norm", "integral", "rereference"}));
  bcan->add_option("x", f1)->required();
  bcan->add_option("y", f2);
  bcan->add_option("--lambda", lambda);
  bcan->add_option("--ref", ref_file, "measure file for the common reference");

  std::string dims = "2,3;2x2", poison = "none";
  int threads = 0;
  auto* verify_cmd = sub("verify", "run the seeded invariant suites");
  verify_cmd->add_option("--dims", dims, "algebras, e.g. \"2,3;2x2\"");
  verify_cmd->add_option("--poison", poison)->check(CLI::IsMember({"none", "flip-sign-in-J"}));
  verify_cmd->add_option("--threads", threads);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  Run run(chosen, args, common);
  int code = kOk;
  json error = nullptr;
  bool scalar = false;
  double scalar_value = 0.0;
  try {
    const auto tol = run.tol();
    auto& o = run.outputs();
    if (chosen == "info") {
      const auto j = run.load(f1);
      if (j.contains("densities")) {
        const auto s = io::state_from_json(j, tol);
        o = algebra_summary(s.algebra());
        o["kind"] = "state";
        o["trace"] = to_string(s.trace().flavor());
        o["norm"] = s.norm();
        o["faithful"] = s.is_faithful(tol);
        o["support_rank"] = std::lround(support(s, tol).trace_can().real());
      } else if (j.contains("algebra")) {
        const auto x = io::element_from_json(j);
        o = algebra_summary(x.algebra());
        o["kind"] = "element";
        o["operator_norm"] = operator_norm(x);
        o["self_adjoint"] = is_self_adjoint(x, tol);
        o["positive"] = is_positive(x, tol);
      } else {
        o = algebra_summary(io::algebra_from_json(j));
        o["kind"] = "algebra";
      }
    } else if (chosen == "gns") {
      const auto s = run.state(f1);
      const auto g = gns(s, tol);
      Vector cyc = g.cyclic;
      json cj = json::array();
      for (Eigen::Index i = 0; i < cyc.size(); ++i) cj.push_back(io::complex_to_json(cyc(i)));
      double state_res = 0.0, hom_res = 0.0;
      const auto basis = AlgebraElement::basis(s.algebra());
      for (const auto& b : basis) {
        state_res = std::max(state_res, std::abs(Complex(cyc.dot(g.pi(b) * cyc)) - s(b)));
        for (const auto& c : basis) hom_res = std::max(hom_res, (g.pi(b * c) - g.pi(b) * g.pi(c)).norm());
      }
      std::vector<Matrix> gens;
      for (const auto& b : basis) gens.push_back(g.pi(b));
      const auto comm = commutant(gens);
      o["dim"] = g.dim;
      o["cyclic_vector"] = cj;
      o["commutant_dim"] = comm.size();
      o["irreducible"] = comm.size() == 1;
      run.verdict("state_reproduced", state_res <= 1e-9, state_res, 1e-9);
      run.verdict("homomorphism", hom_res <= 1e-9, hom_res, 1e-9);
      run.summary("GNS dimension " + std::to_string(g.dim));
    } else if (chosen == "modular") {
      const auto s = run.state(f1);
      const auto md = modular_operator(s, {!no_reduce, tol});
      o["faithful"] = s.is_faithful(tol);
      o["support_rank"] = std::lround(md.support.trace_can().real());
      o["delta_eigenvalues"] = reals_json(md.eigenvalues);
      std::vector<double> gen;
      for (double l : md.eigenvalues) gen.push_back(-std::log(l));
      o["generator_eigenvalues"] = reals_json(gen);
      o["density"] = io::element_to_json(md.density);
      const StandardForm sf(s.algebra());
      const auto om = std_vector(s, sf, tol);
      const double fix = (md.delta(om) - om).hs_norm();
      run.verdict("delta_fixes_omega", fix <= tol.spec, fix, tol.spec);
      run.summary(std::to_string(md.eigenvalues.size()) + " modular eigenvalues");
    } else if (chosen == "flow") {
      const auto s = run.state(f1);
      const auto x = run.element(f2);
      o["t"] = t;
      o["element"] = io::element_to_json(modular_flow(s, x, t, {true, tol}));
    } else if (chosen == "cocycle") {
      const auto phi = run.state(f1);
      const auto psi = run.state(f2);
      const auto u = connes_cocycle(phi, psi, t, tol);
      o["t"] = t;
      o["element"] = io::element_to_json(u);
      const double unit = operator_norm(u.adjoint() * u - support(psi, tol));
      run.verdict("partial_isometry", unit <= 1e-9, unit, 1e-9);
    } else if (chosen == "cocycle-analytic") {
      const auto phi = run.state(f1);
      const auto psi = run.state(f2);
      const Complex zz = parse_complex(z);
      const auto c = cocycle_analytic(phi, psi, zz, tol);
      o["z"] = io::complex_to_json(zz);
      o["element"] = io::element_to_json(c);
      o["operator_norm"] = operator_norm(c);
      if (std::abs(zz - Complex(0.0, -0.5)) < 1e-15) {
        double recon = 0.0;
        for (const auto& e : AlgebraElement::basis(phi.algebra()))
          recon = std::max(recon, std::abs(phi(e) - psi(c.adjoint() * e * c)));
        run.verdict("boundary_reconstruction", recon <= 1e-8, recon, 1e-8);
      }
    } else if (chosen == "kms-check") {
      const auto s = run.state(f1);
      const auto x = run.element(f2);
      const auto y = run.element(f3);
      const auto ts = parse_reals(times, "times");
      const auto h = hamiltonian.empty() ? modular_hamiltonian(s, tol) : run.element(hamiltonian);
      const auto rep = kms_check(s, h, x, y, ts, beta, rel_tol, tol);
      o["kms"] = report_json(rep);
      run.verdict("kms_boundary", rep.pass, rep.max_residual, rep.tolerance);
      if (!rep.pass) code = kCheckFailed;
    } else if (chosen == "pt-density") {
      const auto psi = run.state(f1);
      const auto phi = run.state(f2);
      const auto res = pedersen_takesaki(psi, phi, tol);
      if (const auto* h = std::get_if<AlgebraElement>(&res)) {
        o["density"] = io::element_to_json(*h);
        o["invariance"] = report_json(CheckReport{true, operator_norm(commutator(psi.canonical_density(),
                                                                                 phi.canonical_density())),
                                                  tol.spec, {}});
      } else {
        const auto& f = std::get<InvarianceFailure>(res);
        o["invariance"] = report_json(f.deviation);
        o["commutator_norm"] = f.commutator_norm;
        error = {{"kind", "InvarianceFailure"}, {"message", "psi is not invariant under the modular flow of phi"}};
        code = kPrecondition;
      }
    } else if (chosen == "rn-density") {
      const auto s = run.state(f1);
      o["trace"] = common.trace;
      o["density"] = io::element_to_json(dye_segal_density(s, run.trace(s.algebra())));
    } else if (chosen == "liouvillean") {
      const auto h = run.element(f1);
      const StandardForm sf(h.algebra());
      const auto lv = standard_liouvillean(h, sf, tol);
      o["spectrum"] = reals_json(lv.spectrum());
      const Matrix k = lv.generator.dense();
      const double anti = suites::dense_norm(sf.conjugation_dense().conjugate_linear(k) + k);
      run.verdict("anticommutes_with_J", anti <= 1e-10, anti, 1e-10);
    } else if (chosen == "lp-norm") {
      const auto x = run.element(f1);
      const double p = parse_real(p_text, "exponent");
      scalar = true;
      scalar_value = lp_norm(x, p, run.trace(x.algebra()));
      o["p"] = io::number_to_json(p);
      o["trace"] = common.trace;
      o["norm"] = scalar_value;
    } else if (chosen == "orlicz-norm") {
      const auto x = run.element(f1);
      const auto f = io::orlicz_from_json(run.load(orlicz_file));
      scalar = true;
      scalar_value = luxemburg_norm(x, f, run.trace(x.algebra()));
      o["orlicz"] = f.name();
      o["trace"] = common.trace;
      o["norm"] = scalar_value;
    } else if (chosen == "rearrange") {
      const auto x = run.element(f1);
      const auto sf = rearrangement(x, run.trace(x.algebra()));
      json steps = json::array();
      for (const auto& st : sf.steps()) steps.push_back({{"width", st.width}, {"value", st.value}});
      o["trace"] = common.trace;
      o["steps"] = steps;
      o["support_length"] = sf.support_length();
    } else if (chosen == "commutant") {
      const auto j = run.load(f1);
      std::vector<Matrix> basis;
      if (j.contains("generators")) {
        std::vector<Matrix> gens;
        for (const auto& m : j["generators"]) gens.push_back(io::matrix_from_json(m));
        basis = commutant(gens);
      } else {
        const auto a = io::algebra_from_json(j.contains("algebra") ? j["algebra"] : j);
        basis = commutant(a);
        int expected = 0;
        for (const auto& b : a.blocks()) expected += b.mult * b.mult;
        run.verdict("dimension_is_sum_of_squared_multiplicities", static_cast<int>(basis.size()) == expected,
                    std::abs(static_cast<double>(basis.size()) - expected), 0.0);
      }
      json bj = json::array();
      for (const auto& m : basis) bj.push_back(io::matrix_to_json(m));
      o["dimension"] = basis.size();
      o["basis"] = bj;
    } else if (chosen == "classify") {
      const auto j = run.load(f1);
      const auto a = io::algebra_from_json(j.contains("algebra") ? j["algebra"] : j);
      json fs = json::array();
      for (const auto& f : center_and_classify(a))
        fs.push_back({{"type", f.label}, {"dim", f.dim}, {"central_projection", io::element_to_json(f.central_projection)}});
      o["factors"] = fs;
      o["center_dim"] = center_basis(a).size();
      o["is_factor"] = a.block_count() == 1;
    } else if (chosen == "cond-exp") {
      const auto x = run.element(f1);
      const auto pj = run.load(f2);
      if (!pj.contains("projections")) throw Error(ErrorKind::InvalidInput, "partition file needs \"projections\"");
      std::vector<AlgebraElement> parts;
      for (const auto& e : pj["projections"]) parts.push_back(io::element_from_json(e));
      o["element"] = io::element_to_json(pinch_expectation(x, parts, tol));
    } else if (chosen == "bool spectrum") {
      const auto b = io::boolean_from_json(run.load(f1));
      json pts = json::array();
      for (const auto& h : stone_spectrum(b)) pts.push_back({{"atom", h.atom}});
      o["atoms"] = b.atoms();
      o["points"] = pts;
    } else if (chosen == "bool rn") {
      const auto m2 = io::measure_from_json(run.load(f1));
      const auto m1 = io::measure_from_json(run.load(f2));
      o["quotient"] = reals_json(rn_quotient(m2, m1));
    } else if (chosen == "bool lp-norm") {
      const auto f = fvector(run.load(f1));
      const auto mu = io::measure_from_json(run.load(f2));
      const double p = parse_real(p_text, "exponent");
      scalar = true;
      scalar_value = lp_b_norm(f, p, mu);
      o["p"] = io::number_to_json(p);
      o["norm"] = scalar_value;
    } else if (chosen == "bool canonical") {
      const auto x = io::canonical_from_json(run.load(f1));
      auto second = [&]() {
        if (f2.empty()) throw Error(ErrorKind::InvalidInput, "operation \"" + op + "\" needs two classes");
        return io::canonical_from_json(run.load(f2));
      };
      std::optional<MeasureVector> ref;
      if (!ref_file.empty()) ref = io::measure_from_json(run.load(ref_file));
      auto binary = [&](auto with_ref, auto without) {
        const auto y = second();
        return ref ? with_ref(x, y, *ref) : without(x, y);
      };
      std::optional<CanonicalLpElement> result;
      if (op == "add")
        result = binary([](auto& a, auto& b, auto& r) { return canonical::add(a, b, r); },
                        [](auto& a, auto& b) { return canonical::add(a, b); });
      else if (op == "meet")
        result = binary([](auto& a, auto& b, auto& r) { return canonical::meet(a, b, r); },
                        [](auto& a, auto& b) { return canonical::meet(a, b); });
      else if (op == "join")
        result = binary([](auto& a, auto& b, auto& r) { return canonical::join(a, b, r); },
                        [](auto& a, auto& b) { return canonical::join(a, b); });
      else if (op == "multiply")
        result = binary([](auto& a, auto& b, auto& r) { return canonical::multiply(a, b, r); },
                        [](auto& a, auto& b) { return canonical::multiply(a, b); });
      else if (op == "scale")
        result = canonical::scale(x, lambda);
      else if (op == "rereference") {
        if (!ref) throw Error(ErrorKind::InvalidInput, "rereference needs --ref");
        result = x.rereferenced(*ref);
      } else if (op == "norm") {
        o["norm"] = canonical::norm(x);
      } else if (op == "integral") {
        o["integral"] = canonical_integral(x);
      }
      o["op"] = op;
      if (result) {
        o["class"] = io::canonical_to_json(*result);
        o["norm"] = result->norm();
      }
    } else if (chosen == "verify") {
      VerifyOptions vo;
      vo.seed = common.seed;
      vo.trials = common.trials;
      vo.algebras = parse_dims(dims);
      vo.tol = tol;
      vo.poison = poison == "flip-sign-in-J" ? Poison::FlipSignInJ : Poison::None;
      vo.threads = threads;
      const auto rep = run_verify(vo);
      json ids = json::object();
      for (const auto& [name, r] : rep.ledger.items()) {
        const char* kind = r.kind == IdentityResult::Kind::AtMost    ? "at_most"
                           : r.kind == IdentityResult::Kind::AtLeast ? "at_least"
                                                                     : "fraction";
        json e{{"kind", kind}, {"worst", io::number_to_json(r.worst)}, {"bound", r.bound},
               {"samples", r.samples}, {"pass", r.pass()}};
        if (r.kind == IdentityResult::Kind::Fraction) {
          e["hits"] = r.hits;
          e["required"] = r.required;
        }
        ids[name] = e;
        run.verdict(name, r.pass(), r.worst, r.bound);
        if (!r.pass()) run.summary("FAIL " + name + ": worst " + io::format_number(r.worst) + " vs bound " +
                                   io::format_number(r.bound));
      }
      json algs = json::array();
      for (const auto& a : rep.algebras) algs.push_back(io::algebra_to_json(a));
      o["dims"] = dims;
      o["algebras"] = algs;
      o["trials"] = rep.trials;
      o["poison"] = poison;
      o["identities"] = ids;
      o["warnings"] = rep.warnings;
      o["pass"] = rep.pass;
      for (const auto& w : rep.warnings) run.summary("warning: " + w);
      run.summary(std::string(rep.pass ? "PASS" : "FAIL") + ": " + std::to_string(rep.ledger.items().size()) +
                  " identities, " + std::to_string(rep.trials) + " trials");
      if (!rep.pass) code = kCheckFailed;
    }
    if (code == kOk && !run.all_pass()) code = kCheckFailed;
  } catch (const Error& e) {
    code = exit_code_for(e.kind());
    error = {{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}};
  } catch (const json::exception& e) {
    code = kInputError;
    error = {{"kind", "InvalidInput"}, {"message", e.what()}};
  } catch (const std::exception& e) {
    code = kInputError;
    error = {{"kind", "InvalidInput"}, {"message", e.what()}};
  }

  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (scalar && !common.json_output && error.is_null()) {
    out << io::format_number(scalar_value) << '\n';
  } else {
    out << io::dump_report(run.report(seconds, error)) << '\n';
  }
  for (const auto& line : run.summary_lines()) err << chosen << ": " << line << '\n';
  if (!error.is_null()) err << chosen << ": error: " << error["message"].get<std::string>() << '\n';
  return code;
}

}  // namespace nckit::cli
