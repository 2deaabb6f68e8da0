#include "dd/serialize.hpp"

#include <fstream>

namespace dd {

Json to_json(const PLPath& p) {
  Json x = Json::array(), y = Json::array();
  for (const auto& v : p.xs()) x.push_back(format_rat(v));
  for (const auto& v : p.ys()) y.push_back(format_rat(v));
  return Json{{"x", x}, {"y", y}};
}

PLPath path_from_json(const Json& j) {
  std::vector<Rat> xs, ys;
  for (const auto& v : j.at("x")) xs.push_back(parse_rat(v.get<std::string>()));
  for (const auto& v : j.at("y")) ys.push_back(parse_rat(v.get<std::string>()));
  return PLPath(std::move(xs), std::move(ys));
}

Json to_json(const PathFamily& f) {
  Json runs = Json::array();
  for (const auto& r : f.runs()) {
    Json run = to_json(r.path);
    run["mult"] = r.mult.str();
    runs.push_back(std::move(run));
  }
  return Json{{"runs", runs}};
}

PathFamily family_from_json(const Json& j) {
  std::vector<PathFamily::Run> runs;
  for (const auto& r : j.at("runs"))
    runs.push_back({path_from_json(r), Int(r.at("mult").get<std::string>())});
  return PathFamily(std::move(runs));
}

Json to_json(const PLMeasure& m) { return Json{{"cdf", to_json(m.cdf())}}; }

PLMeasure measure_from_json(const Json& j) { return PLMeasure(path_from_json(j.at("cdf"))); }

DiffuseMeasure diffuse_from_json(const Json& j) {
  return DiffuseMeasure(path_from_json(j.at("cdf")));
}

Json to_json(const DiagMorphism& m) {
  return Json{{"source", {m.source().pair.p.str(), m.source().pair.q.str()}},
              {"target", {m.target().pair.p.str(), m.target().pair.q.str()}},
              {"paths", to_json(m.paths())},
              {"conjugator",
               {{"kind", "boundary-canonical"},
                {"rate_upper", format_rat(m.conjugator().rate_upper())},
                {"kappa", format_rat(m.presentation_kappa())}}}};
}

Json to_json(const Certificate& c) {
  Json rounds = Json::array();
  for (const auto& r : c.rounds) {
    Json probes = Json::array();
    for (const auto& p : r.probes)
      probes.push_back(Json{{"id", p.id},
                            {"lipschitz", format_rat(p.lipschitz)},
                            {"defect_upper", format_rat(p.defect_upper)}});
    Json jr{{"n", r.n},
            {"m", r.m},
            {"side", std::string(1, r.side)},
            {"xi", to_json(r.xi)},
            {"zeta", to_json(r.zeta)},
            {"kappa", format_rat(r.kappa)},
            {"delta", format_rat(r.delta)},
            {"delta_eff", format_rat(r.delta_eff)},
            {"matching", format_rat(r.matching)},
            {"matching_lt_delta", r.matching_lt_delta},
            {"budget", format_rat(r.budget)},
            {"probes", probes},
            {"growth", r.probe_growth}};
    if (r.k) jr["k"] = *r.k;
    if (r.l) jr["l"] = *r.l;
    rounds.push_back(std::move(jr));
  }
  return Json{{"schema", "ddf-certificate-v1"},
              {"kind", c.kind},
              {"total_budget", format_rat(c.total_budget)},
              {"total_defect", format_rat(c.total_defect)},
              {"pass", c.pass},
              {"rounds", rounds}};
}

Certificate certificate_from_json(const Json& j) {
  Certificate c;
  c.kind = j.at("kind").get<std::string>();
  c.total_budget = parse_rat(j.at("total_budget").get<std::string>());
  c.total_defect = parse_rat(j.at("total_defect").get<std::string>());
  c.pass = j.at("pass").get<bool>();
  for (const auto& jr : j.at("rounds")) {
    RoundRecord r;
    r.n = jr.at("n").get<long>();
    r.m = jr.at("m").get<long>();
    r.side = jr.at("side").get<std::string>().at(0);
    if (jr.contains("k")) r.k = jr.at("k").get<long>();
    if (jr.contains("l")) r.l = jr.at("l").get<long>();
    r.xi = family_from_json(jr.at("xi"));
    r.zeta = family_from_json(jr.at("zeta"));
    r.kappa = parse_rat(jr.at("kappa").get<std::string>());
    r.delta = parse_rat(jr.at("delta").get<std::string>());
    r.delta_eff = parse_rat(jr.at("delta_eff").get<std::string>());
    r.matching = parse_rat(jr.at("matching").get<std::string>());
    r.matching_lt_delta = jr.at("matching_lt_delta").get<bool>();
    r.budget = parse_rat(jr.at("budget").get<std::string>());
    for (const auto& jp : jr.at("probes"))
      r.probes.push_back({jp.at("id").get<std::string>(),
                          parse_rat(jp.at("lipschitz").get<std::string>()),
                          parse_rat(jp.at("defect_upper").get<std::string>())});
    for (const auto& g : jr.at("growth")) r.probe_growth.push_back(g.get<std::string>());
    c.rounds.push_back(std::move(r));
  }
  return c;
}

Json sequence_descriptor(const Sequence& s) {
  Json stages = Json::array();
  for (long n = 1; n <= s.size(); ++n) {
    stages.push_back(Json{{"p", s.stage(n).alg.pair.p.str()},
                          {"q", s.stage(n).alg.pair.q.str()},
                          {"trace", to_json(PLMeasure(s.stage(n).trace.cdf()))}});
  }
  return Json{{"schema", "ddf-sequence-v1"},
              {"seed", {s.seed().p.str(), s.seed().q.str()}},
              {"stages", stages},
              {"top", to_json(PLMeasure(s.top_measure().cdf()))}};
}

std::string dump_json(const Json& j) { return j.dump(2); }

Json parse_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  Json j;
  in >> j;
  return j;
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace dd
