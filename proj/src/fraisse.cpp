#include "dd/fraisse.hpp"

#include <algorithm>
#include <sstream>

namespace dd {

namespace {

struct NeedsStage : std::runtime_error {
  long stage;
  explicit NeedsStage(long s)
      : std::runtime_error("sequence stage " + std::to_string(s) + " required"), stage(s) {}
};

Rat pow2neg(long k) {
  Rat r(1);
  for (long i = 0; i < k; ++i) r /= 2;
  return r;
}

}  // namespace

Sequence Sequence::build(const PrimePair& seed, long stages, const DiffuseMeasure& top) {
  if (stages < 1) throw std::invalid_argument("Sequence::build: stages must be >= 1");
  Sequence s;
  s.seed_ = seed;
  s.top_ = top;
  std::vector<PrimePair> pairs{seed};
  std::vector<DiagMorphism> steps;
  for (long n = 1; n < stages; ++n) {
    const PrimePair cur = pairs.back();
    Int divisor(n + 1);
    auto [k0, k1] = select_expansion_factors(cur, divisor, default_expansion_bound(cur, divisor));
    PrimePair next(cur.p * k0, cur.q * k1);
    steps.push_back(build_embedding(DDAlgebra{cur}, DDAlgebra{next}, Rat(1, 2)));
    pairs.push_back(next);
  }
  auto traces = coherent_trace_family(steps, top);
  for (long n = 0; n < stages; ++n) {
    if (!traces[size_t(n)].is_faithful())
      throw std::logic_error("Sequence::build: induced trace not faithful");
    s.stages_.push_back({DDAlgebra{pairs[size_t(n)]}, DiffuseMeasure(traces[size_t(n)].cdf())});
  }
  s.steps_ = std::move(steps);
  return s;
}

const Sequence::Stage& Sequence::stage(long n) const {
  if (n < 1 || n > size()) throw std::out_of_range("Sequence::stage");
  return stages_[size_t(n - 1)];
}

const DiagMorphism& Sequence::step(long n) const {
  if (n < 1 || n >= size()) throw std::out_of_range("Sequence::step");
  return steps_[size_t(n - 1)];
}

const DiagMorphism& Sequence::composite(long n, long m) const {
  if (n < 1 || m > size() || n > m) throw std::out_of_range("Sequence::composite");
  auto key = std::make_pair(n, m);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  DiagMorphism comp;
  if (n == m)
    comp = identity_morphism(stage(n).alg);
  else if (m == n + 1)
    comp = step(n);
  else
    comp = compose(step(m - 1), composite(n, m - 1));
  return cache_.emplace(key, std::move(comp)).first->second;
}

Sequence Sequence::extended(long stages) const {
  if (stages <= size()) return *this;
  return build(seed_, stages, top_);
}

Sequence::Audit Sequence::audit() const {
  Audit a;
  a.dagger_diameters = a.dagger_ordered = a.ddagger = a.trace_coherent = true;
  for (long m = 1; m <= size(); ++m) {
    if (stage(m).alg.dim() % Int(m) != 0) a.ddagger = false;
    for (long n = 1; n <= m; ++n) {
      const DiagMorphism& c = composite(n, m);
      if (c.paths().max_diameter() > pow2neg(m - n)) a.dagger_diameters = false;
      if (!c.paths().ordered()) a.dagger_ordered = false;
      a.max_kappa = std::max(a.max_kappa, c.presentation_kappa());
      if (n < m && !(induced_measure(c, stage(m).trace) == PLMeasure(stage(n).trace.cdf())))
        a.trace_coherent = false;
    }
  }
  return a;
}

Rat modulus_delta(const std::vector<DDElement>& F, const Rat& eps) {
  if (F.empty()) throw std::invalid_argument("modulus_delta: empty probe set");
  if (eps <= 0) throw std::invalid_argument("modulus_delta: eps must be positive");
  Rat lmax(0);
  for (const auto& f : F) lmax = std::max(lmax, f.lipschitz());
  if (lmax == 0) return Rat(1);
  return std::min(Rat(1), Rat(eps / lmax));
}

std::pair<bool, std::optional<MatchingWitness>> verify_path_matching(const PathFamily& xi,
                                                                     const PathFamily& zeta,
                                                                     const Rat& delta) {
  if (xi.count() != zeta.count())
    throw std::invalid_argument("verify_path_matching: family sizes differ (SizeMismatch)");
  size_t a = 0, b = 0;
  Int rem_a = xi.runs()[0].mult, rem_b = zeta.runs()[0].mult, pos(0);
  while (a < xi.runs().size() && b < zeta.runs().size()) {
    const PLPath& f = xi.runs()[a].path;
    const PLPath& g = zeta.runs()[b].path;
    Rat sup = f.sup_distance(g);
    if (sup >= delta) {
      MatchingWitness w;
      w.index = pos;
      Rat best(-1);
      for (const auto& x : union_breakpoints({&f, &g})) {
        Rat d = f.eval(x) - g.eval(x);
        if (d < 0) d = -d;
        if (d > best) {
          best = d;
          w.t = x;
        }
      }
      Int next = pos + 1;
      w.c = next < xi.count() ? xi.at(next).min_value() : Rat(1);
      w.d = g.max_value();
      return {false, w};
    }
    Int step = std::min(rem_a, rem_b);
    pos += step;
    rem_a -= step;
    rem_b -= step;
    if (rem_a == 0 && ++a < xi.runs().size()) rem_a = xi.runs()[a].mult;
    if (rem_b == 0 && ++b < zeta.runs().size()) rem_b = zeta.runs()[b].mult;
  }
  return {true, std::nullopt};
}

Probe Probe::fresh(std::string id, DDElement root) {
  Probe p;
  p.id = std::move(id);
  p.root = std::move(root);
  p.chain = PathFamily::single(PLPath::identity());
  return p;
}

Probe Probe::pushed(const std::string& tag, const DiagMorphism& m) const {
  Probe p;
  p.id = id + "+" + tag;
  p.root = root;
  SortedStatistics st = order_statistics(compose_raw(chain, m.paths()));
  p.chain = std::move(st.family);
  p.chain_kappa = chain_kappa + m.presentation_kappa() + st.kappa();
  p.chain_rate = chain_rate + m.conjugator().rate_upper();
  return p;
}

std::vector<Probe> corpus_probes(const DDAlgebra& alg, long stage_index) {
  std::vector<Probe> out;
  for (auto& f : generator_corpus(alg))
    out.push_back(Probe::fresh("corpus:" + std::to_string(stage_index) + ":" + f.label(), f));
  return out;
}

namespace {

// Structural alignment of boundary patterns of two families presenting
// morphisms into the same target: equal value-0/value-1 cell totals at both
// endpoints. Interior cells of valid patterns then sit on the same unit
// grid, which is what a shared regrouping unitary needs.
bool patterns_aligned(const PathFamily& a, const PathFamily& b) {
  for (bool at_one : {false, true}) {
    auto pa = boundary_pattern(a, at_one);
    auto pb = boundary_pattern(b, at_one);
    auto total = [](const BoundaryPattern& p, BoundaryPattern::Class cls) {
      Int t(0);
      for (const auto& c : p.cells)
        if (c.cls == cls) t += c.size;
      return t;
    };
    if (total(pa, BoundaryPattern::Class::Zero) != total(pb, BoundaryPattern::Class::Zero))
      return false;
    if (total(pa, BoundaryPattern::Class::One) != total(pb, BoundaryPattern::Class::One))
      return false;
  }
  return true;
}

// Certified bound on |(response∘gamma∘chain)(root) - (phi∘chain)(root)|.
// Both totals share the response's outer conjugator; blocks pair in the
// round-sorted order, leaving the round matching scaled by the chain's
// Lipschitz data plus the chain-conjugator twist and presentation defects.
Rat probe_defect_upper(const Probe& p, const DiagMorphism& xi_round, const DiagMorphism& z_round,
                       const Rat& round_matching) {
  Rat kappa_round = xi_round.presentation_kappa() + z_round.presentation_kappa();
  Rat factor = p.root.lipschitz() * p.chain.max_lipschitz() +
               2 * p.root.norm_upper() * p.chain_rate;
  return factor * (round_matching + kappa_round) + p.root.lipschitz() * 2 * p.chain_kappa;
}

}  // namespace

AmalgamationResult amalgamate(Sequence& seq, long n, const std::vector<Probe>& F, const Rat& eps,
                              const DiagMorphism& gamma, const DiffuseMeasure& sigma,
                              long min_stage, long max_stage) {
  if (n < 1 || n > seq.size()) throw PreconditionViolation("amalgamate: stage index out of range");
  if (!(gamma.source() == seq.stage(n).alg))
    throw PreconditionViolation("amalgamate: gamma source is not stage " + std::to_string(n));
  if (F.empty()) throw PreconditionViolation("amalgamate: empty probe set");
  if (eps <= 0) throw PreconditionViolation("amalgamate: eps must be positive");
  if (!(induced_measure(gamma, sigma) == PLMeasure(seq.stage(n).trace.cdf())))
    throw PreconditionViolation("amalgamate: gamma is not trace-preserving onto tau_n");

  std::vector<DDElement> roots;
  for (const auto& p : F) roots.push_back(p.root);
  Rat delta = modulus_delta(roots, eps);
  Rat mesh_gamma = gamma.paths().max_diameter();
  bool spec_mesh_ok = mesh_gamma <= delta / 3;

  const Int pq = gamma.target().dim();
  std::string last_error = "no admissible stage tried";
  for (long m = std::max({n, min_stage, 1L}); m <= max_stage; ++m) {
    if (m > seq.size()) {
      Sequence ext = seq.extended(m);
      // re-anchoring may invalidate the challenge's trace precondition
      if (!(induced_measure(gamma, sigma) == PLMeasure(ext.stage(n).trace.cdf())))
        throw NeedsStage(m);
      seq = std::move(ext);
    }
    if (seq.stage(m).alg.dim() % pq != 0) continue;
    DiagMorphism gamma_prime, z;
    try {
      gamma_prime =
          build_transport_embedding(gamma.target(), seq.stage(m).alg, sigma, seq.stage(m).trace);
      z = compose(gamma_prime, gamma);
    } catch (const InfeasibleMesh& e) {
      last_error = e.what();
      continue;
    }
    const DiagMorphism& xi = seq.composite(n, m);
    if (z.path_count() != xi.path_count())
      throw std::logic_error("amalgamate: composite path count mismatch");
    if (!patterns_aligned(z.paths(), xi.paths())) {
      last_error = "challenge composite boundary pattern does not align with phi_n^m";
      continue;
    }
    if (!(induced_measure(z, seq.stage(m).trace) == PLMeasure(seq.stage(n).trace.cdf())))
      throw std::logic_error("amalgamate: composite lost trace exactness");

    Rat matching = xi.paths().sup_matching(z.paths());
    Rat delta_eff = xi.paths().max_diameter() + z.paths().max_diameter();
    if (matching > delta_eff)
      throw std::logic_error("amalgamate: matching exceeds the counting bound");

    RoundRecord rec;
    rec.n = n;
    rec.m = m;
    rec.xi = xi.paths();
    rec.zeta = z.paths();
    rec.kappa = xi.presentation_kappa() + z.presentation_kappa();
    rec.delta = delta;
    rec.delta_eff = delta_eff;
    rec.matching = matching;
    rec.matching_lt_delta = matching < delta;
    rec.budget = 3 * eps;
    if (!spec_mesh_ok)
      rec.probe_growth.push_back("note: gamma mesh " + format_rat(mesh_gamma) +
                                 " exceeds delta/3 = " + format_rat(Rat(delta / 3)));

    Rat worst(0);
    bool ok = true;
    for (const auto& p : F) {
      Rat d = probe_defect_upper(p, xi, z, matching);
      rec.probes.push_back({p.id, p.root.lipschitz(), d});
      worst = std::max(worst, d);
      if (!(d < 3 * eps)) ok = false;
    }
    if (!ok) {
      last_error =
          "defect bound " + format_rat(worst) + " not below 3*eps at stage " + std::to_string(m);
      continue;
    }

    AmalgamationResult res;
    res.m = m;
    res.eta = DiagMorphism(gamma.target(), seq.stage(m).alg, gamma_prime.paths(),
                           UnitaryPath::product({xi.conjugator(), z.conjugator().adjoint(),
                                                 gamma_prime.conjugator()}));
    res.cert.kind = "amalgamation";
    res.cert.total_budget = 3 * eps;
    res.cert.total_defect = worst;
    res.cert.pass = true;
    res.cert.rounds.push_back(std::move(rec));
    return res;
  }
  throw BudgetExceeded("amalgamate: no stage up to " + std::to_string(max_stage) +
                       " meets the defect budget (" + last_error + ")");
}

namespace {

Certificate run_intertwining(Sequence& seqA, Sequence& seqB, int rounds, const Rat& eps,
                             bool weak) {
  Certificate cert;
  cert.kind = weak ? "weak-intertwining" : "intertwining";
  cert.pass = true;

  std::vector<Probe> probes = corpus_probes(seqA.stage(1).alg, 1);
  // challenge state: gamma maps `answering` stage n into the other side's
  // stage tgt; responses become the next round's challenges with sides swapped
  DiagMorphism challenge;
  long n = 1, tgt = 0;
  std::map<char, long> last_tgt{{'A', 0}, {'B', 0}};
  Rat total_defect(0), total_budget(0);

  for (int i = 1; i <= rounds; ++i) {
    Rat eps_i = eps * pow2neg(i);
    total_budget += eps_i;
    char side = (i % 2 == 1) ? 'A' : 'B';
    Sequence& answering = (side == 'A') ? seqA : seqB;
    Sequence& other = (side == 'A') ? seqB : seqA;
    char other_side = (side == 'A') ? 'B' : 'A';

    long round_n = n;  // paper's challenge anchor for the record
    long prep = n;     // weak-schedule preparation index
    if (weak) {
      if (i == 1) {
        // prepare one stage later on the answering side: the (WA) response
        // is staged at k_1 > n_1 and the probe set becomes phi_{n}^{k}[F]
        if (n + 1 > answering.size()) throw NeedsStage(n + 1);
        prep = n + 1;
        for (auto& p : probes) p = p.pushed("phi" + std::to_string(i), answering.composite(n, prep));
        n = prep;
      } else {
        // extend the incoming response through the other side's sequence map:
        // the round answers compose(phi_{tgt}^{tgt+1}, challenge)
        if (tgt + 1 > other.size()) throw NeedsStage(tgt + 1);
        prep = tgt + 1;
        challenge = compose(other.composite(tgt, prep), challenge);
        tgt = prep;
      }
    }

    std::optional<AmalgamationResult> res;
    RoundRecord rec;
    if (i == 1) {
      // bootstrap: pick the other side's stage for the first challenge
      for (long t = 1; t <= other.size() + 1; ++t) {
        if (t > other.size()) throw NeedsStage(t);
        if (other.stage(t).alg.dim() % answering.stage(n).alg.dim() != 0) continue;
        DiagMorphism cand;
        try {
          cand = build_transport_embedding(answering.stage(n).alg, other.stage(t).alg,
                                           answering.stage(n).trace, other.stage(t).trace);
        } catch (const InfeasibleMesh&) {
          continue;
        }
        try {
          res = amalgamate(answering, n, probes, eps_i / 3, cand, other.stage(t).trace,
                           weak ? n + 1 : 0);
          challenge = cand;
          tgt = t;
          break;
        } catch (const BudgetExceeded&) {
          continue;
        }
      }
      if (!res) throw NeedsStage(other.size() + 1);
    } else {
      res = amalgamate(answering, n, probes, eps_i / 3, challenge, other.stage(tgt).trace,
                       weak ? n + 1 : 0);
    }
    rec = res->cert.rounds[0];
    rec.side = side;
    rec.budget = eps_i;
    rec.n = round_n;
    if (weak) {
      rec.k = prep;
      rec.l = tgt;
    }
    total_defect += res->cert.total_defect;
    if (!(res->cert.total_defect <= eps_i)) {
      cert.pass = false;
      rec.probe_growth.push_back("round defect exceeds the round budget");
    }

    // probe growth per the recursion: gamma_i[F'_i] ⊆ G'_i
    std::vector<Probe> next;
    for (const auto& p : probes) {
      Probe g = p.pushed("gamma" + std::to_string(i), challenge);
      rec.probe_growth.push_back(p.id + " -> " + g.id);
      next.push_back(std::move(g));
    }
    cert.rounds.push_back(std::move(rec));
    probes = std::move(next);

    // the response eta: other side's stage tgt -> answering side's stage res.m
    last_tgt[other_side] = std::max(last_tgt[other_side], tgt);
    long next_n = tgt;
    long next_tgt = res->m;
    challenge = res->eta;
    n = next_n;
    tgt = next_tgt;
  }
  cert.total_budget = total_budget;
  cert.total_defect = total_defect;
  return cert;
}

}  // namespace

Certificate intertwine(Sequence& seqA, Sequence& seqB, int rounds, const Rat& eps) {
  for (int attempt = 0; attempt < 6; ++attempt) {
    try {
      return run_intertwining(seqA, seqB, rounds, eps, false);
    } catch (const NeedsStage& ns) {
      seqA = seqA.extended(ns.stage);
      seqB = seqB.extended(ns.stage);
    }
  }
  throw BudgetExceeded("intertwine: stage extension did not converge");
}

Certificate weak_intertwine(Sequence& seqA, Sequence& seqB, int rounds, const Rat& eps) {
  for (int attempt = 0; attempt < 6; ++attempt) {
    try {
      return run_intertwining(seqA, seqB, rounds, eps, true);
    } catch (const NeedsStage& ns) {
      seqA = seqA.extended(ns.stage);
      seqB = seqB.extended(ns.stage);
    }
  }
  throw BudgetExceeded("weak_intertwine: stage extension did not converge");
}

VerifyReport verify_certificate(const Certificate& cert, const Sequence& seqA,
                                const Sequence& seqB) {
  VerifyReport rep;
  rep.pass = true;
  auto fail = [&](const std::string& msg) {
    rep.pass = false;
    rep.failures.push_back(msg);
  };
  for (size_t r = 0; r < cert.rounds.size(); ++r) {
    const RoundRecord& rec = cert.rounds[r];
    std::string tag = "round " + std::to_string(r + 1) + ": ";
    Rat matching;
    try {
      matching = rec.xi.sup_matching(rec.zeta);
    } catch (const std::exception& e) {
      fail(tag + e.what());
      continue;
    }
    if (matching != rec.matching) fail(tag + "recorded matching differs from recomputation");
    Rat delta_eff = rec.xi.max_diameter() + rec.zeta.max_diameter();
    if (rec.delta_eff != delta_eff) fail(tag + "recorded delta_eff differs from recomputation");
    if (rec.matching_lt_delta != (matching < rec.delta))
      fail(tag + "delta comparison flag is wrong");
    for (const auto& p : rec.probes) {
      // every recorded defect must dominate the recomputed certified core
      Rat lower = p.lipschitz * (matching + rec.kappa);
      if (p.defect_upper < lower)
        fail(tag + "probe " + p.id + " defect is below the recomputed bound");
      if (!(p.defect_upper < rec.budget))
        fail(tag + "probe " + p.id + " defect exceeds the round budget");
      if (p.id.rfind("corpus:", 0) == 0 && p.id.find('+') == std::string::npos) {
        // root probes: re-derive the Lipschitz certificate from the corpus
        auto rest = p.id.substr(7);
        auto colon = rest.find(':');
        long stage_idx = std::stol(rest.substr(0, colon));
        std::string label = rest.substr(colon + 1);
        const Sequence& s = rec.side == 'A' ? seqA : seqB;
        if (stage_idx >= 1 && stage_idx <= s.size()) {
          for (const auto& f : generator_corpus(s.stage(stage_idx).alg))
            if (f.label() == label && f.lipschitz() != p.lipschitz)
              fail(tag + "probe " + p.id + " Lipschitz certificate mismatch");
        }
      }
    }
  }
  return rep;
}

}  // namespace dd
