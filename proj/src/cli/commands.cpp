#include "hilbmult/cli/commands.hpp"

#include "hilbmult/cli/suites.hpp"
#include "hilbmult/hilbmult.hpp"

namespace hilbmult::cli {

namespace {

using Vec = VectorX<Complex>;

Json base_report(const std::string& command, std::uint64_t seed) {
  Json r;
  r["command"] = command;
  r["status"] = "pass";
  r["seed"] = seed;
  r["residuals"] = Json::object();
  r["artifacts"] = Json::object();
  return r;
}

const Json& field(const Json& in, const char* key) {
  if (!in.is_object() || !in.contains(key))
    throw PayloadError(std::string("payload: missing field \"") + key + "\"");
  return in[key];
}

std::string family_of(const JobSpec& job) {
  std::string fam = job.family;
  if (job.input.is_object() && job.input.contains("family")) {
    if (!job.input["family"].is_string()) throw PayloadError("payload.family: expected a string");
    fam = job.input["family"].get<std::string>();
  }
  if (fam != "mult" && fam != "add")
    throw UsageError("unknown family '" + fam + "' (expected mult or add)");
  return fam;
}

std::vector<Vec> decode_inputs(const Json& j, std::size_t count, std::size_t dim) {
  if (!j.is_array()) throw PayloadError("payload.inputs: expected an array of vectors");
  if (j.size() != count)
    throw ShapeError("payload.inputs: polynomial has " + std::to_string(count) + " variables, got " +
                     std::to_string(j.size()) + " vectors");
  std::vector<Vec> xs;
  for (std::size_t i = 0; i < j.size(); ++i) {
    xs.push_back(decode_vector(j[i], "payload.inputs[" + std::to_string(i) + "]"));
    if (static_cast<std::size_t>(xs.back().size()) != dim)
      throw ShapeError("payload.inputs[" + std::to_string(i) + "]: dim " +
                       std::to_string(xs.back().size()) + ", operator acts on dim " +
                       std::to_string(dim));
  }
  return xs;
}

NormOptions norm_options(const JobSpec& job) {
  NormOptions o;
  o.seed = job.seed;
  return o;
}

Outcome eval_grid(const JobSpec& job, Json report) {
  const auto& in = job.input;
  const auto a = field(in, "a"), b = field(in, "b"), n = field(in, "npoints");
  if (!a.is_number() || !b.is_number()) throw PayloadError("payload.a/b: expected numbers");
  if (!n.is_number_integer() || n.get<long long>() < 1)
    throw PayloadError("payload.npoints: expected a positive integer");
  const Grid g = make_grid(a.get<double>(), b.get<double>(), n.get<std::size_t>());
  const auto me_poly = decode_poly(field(in, "me"), "payload.me");
  if (me_poly.nvars() > 1) throw PayloadError("payload.me: expected a univariate polynomial");
  const Multiplier<Complex> me = [&me_poly](double x) {
    return me_poly.nvars() == 0 ? poly_eval(me_poly, std::span<const Complex>{})
                                : poly_eval(me_poly, {Complex(x)});
  };
  const auto p = decode_poly(field(in, "poly"), "payload.poly");

  std::vector<GridFunctionXcd> gs;
  if (in.contains("inputs")) {
    for (auto& x : decode_inputs(in["inputs"], p.nvars(), g.npoints())) gs.push_back({g, x});
  } else {
    gs.assign(p.nvars(), GridFunctionXcd{g, Vec::Ones(static_cast<Eigen::Index>(g.npoints()))});
  }

  const auto direct = grid_calculus(g, me, p, gs);
  const auto generic = grid_calculus_generic(g, me, p, gs);
  const auto ctx = make_mult_context(mult_operator(g, me));

  report["residuals"]["route_agreement"] = detail::max_abs<Complex>(direct.values - generic.values);
  auto& art = report["artifacts"];
  art["grid"] = {{"a", g.a()}, {"b", g.b()}, {"npoints", g.npoints()}};
  art["nodes"] = g.nodes();
  art["me"] = encode_poly(me_poly);
  art["poly"] = encode_poly(p);
  art["family"] = "mult";
  art["output"] = encode_vector(direct.values);
  art["norm"] = encode_bracket(norm_bounds(calculus_map(ctx, p), norm_options(job)));
  return {std::move(report), 0};
}

}  // namespace

Outcome run_spectrum(const JobSpec& job) {
  Json report = base_report("spectrum", job.seed);
  const Json& payload = job.input.is_object() ? field(job.input, "matrix") : job.input;
  const bool want_basis = job.input.is_object() && job.input.value("basis", false);
  const auto m = decode_matrix(payload, "payload.matrix");
  if (m.rows() != m.cols())
    throw ShapeError("spectrum: matrix is " + std::to_string(m.rows()) + "x" +
                     std::to_string(m.cols()) + ", expected square");
  const auto a = linear_map(m);

  SpectralDecomposition<Complex> d =
      is_self_adjoint(a) ? eigh(a)
      : is_normal(a)     ? eig_normal(a, job.seed)
                         : throw DomainError("spectrum: matrix is neither Hermitian nor normal, "
                                             "commutator A*A - AA* " +
                                             describe(max_entry(m.adjoint() * m - m * m.adjoint())));

  report["residuals"]["reconstruction"] = static_cast<double>((d.reconstruct() - m).cwiseAbs().maxCoeff());
  auto& art = report["artifacts"];
  art["matrix"] = encode_matrix(m);
  art["eigenvalues"] = encode_vector(d.eigenvalues);
  if (want_basis) art["basis"] = encode_matrix(d.basis);
  return {std::move(report), 0};
}

Outcome run_eval(const JobSpec& job) {
  Json report = base_report("eval", job.seed);
  if (!job.input.is_object()) throw PayloadError("payload: expected a JSON object");
  if (job.input.contains("npoints")) return eval_grid(job, std::move(report));

  const auto m = decode_matrix(field(job.input, "A"), "payload.A");
  if (m.rows() != m.cols()) throw ShapeError("eval: operator matrix must be square");
  const auto a = linear_map(m);
  const auto p = decode_poly(field(job.input, "poly"), "payload.poly");
  const std::string fam = family_of(job);
  const auto xs = decode_inputs(field(job.input, "inputs"), p.nvars(), static_cast<std::size_t>(m.rows()));

  const auto ctx = fam == "add" ? make_add_context(a) : make_mult_context(a);
  const Vec out = calculus_apply(ctx, p, xs);

  auto& art = report["artifacts"];
  art["A"] = encode_matrix(m);
  art["poly"] = encode_poly(p);
  art["family"] = fam;
  Json ins = Json::array();
  for (const auto& x : xs) ins.push_back(encode_vector(x));
  art["inputs"] = std::move(ins);
  art["output"] = encode_vector(out);
  if (const auto map = try_calculus_map(ctx, p)) {
    report["residuals"]["route_agreement"] = detail::max_abs<Complex>(apply(*map, xs) - out);
    art["norm"] = encode_bracket(norm_bounds(*map, norm_options(job)));
  } else {
    art["norm"] = nullptr;  // T_n is not multilinear, so there is no map to bracket
  }
  return {std::move(report), 0};
}

Outcome run_norm(const JobSpec& job) {
  Json report = base_report("norm", job.seed);
  MultiMapXcd t = [&] {
    if (job.input.is_object() && job.input.contains("matrix"))
      return linear_map(decode_matrix(job.input["matrix"], "payload.matrix"));
    if (job.input.is_object() && job.input.contains("map"))
      return decode_multimap(job.input["map"], "payload.map");
    return decode_multimap(job.input, "payload");
  }();
  const auto b = norm_bounds(t, norm_options(job));
  report["residuals"]["gap"] = b.upper - b.lower;
  report["artifacts"]["map"] = encode_multimap(t);
  report["artifacts"]["norm"] = encode_bracket(b);
  return {std::move(report), 0};
}

Outcome run_verify(const JobSpec& job) {
  Json report = base_report("verify", job.seed);
  std::vector<std::string> suites;
  if (job.suite == "all") suites = suite_names();
  else suites.push_back(job.suite);
  for (const auto& s : suites)
    if (std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end())
      throw UsageError("unknown suite '" + s + "'");

  SuiteOptions opts{job.seed, job.family, job.tolerances};
  bool all_pass = true;
  Json checks = Json::array();
  for (const auto& s : suites) {
    for (const auto& r : run_suite(s, opts)) {
      all_pass = all_pass && r.pass;
      report["residuals"][r.name] = r.max_residual;
      Json c;
      c["name"] = r.name;
      c["status"] = r.pass ? "pass" : "fail";
      c["max_residual"] = r.max_residual;
      c["tol"] = r.tol;
      c["trials"] = r.trials;
      c["counterexample"] = r.counterexample ? Json(*r.counterexample) : Json(nullptr);
      checks.push_back(std::move(c));
    }
  }
  report["status"] = all_pass ? "pass" : "fail";
  report["artifacts"]["suites"] = suites;
  report["artifacts"]["family"] = job.family;
  report["artifacts"]["checks"] = std::move(checks);
  return {std::move(report), all_pass ? 0 : 1};
}

Outcome error_outcome(const std::string& command, std::uint64_t seed, const std::string& message) {
  Json report = base_report(command, seed);
  report["status"] = "error";
  report["error"] = message;
  return {std::move(report), 2};
}

Outcome run_job(const JobSpec& job) {
  try {
    if (job.command == "spectrum") return run_spectrum(job);
    if (job.command == "eval") return run_eval(job);
    if (job.command == "verify") return run_verify(job);
    if (job.command == "norm") return run_norm(job);
    throw UsageError("unknown command '" + job.command + "'");
  } catch (const Error& e) {
    return error_outcome(job.command, job.seed, e.what());
  }
}

std::string render(const Json& report) { return report.dump(2) + "\n"; }

}  // namespace hilbmult::cli
