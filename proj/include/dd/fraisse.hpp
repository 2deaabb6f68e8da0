#pragma once

#include <map>
#include <optional>

#include "dd/morphism.hpp"
#include "dd/trace.hpp"

namespace dd {

struct PreconditionViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Jiang-Su-type sequence: prime dimension-drop stages with canonical
// mesh-1/2 steps, traces anchored at the top stage.
class Sequence {
 public:
  struct Stage {
    DDAlgebra alg;
    DiffuseMeasure trace;
  };

  Sequence() = default;
  // stage 1 = seed; step n -> n+1 built with expansion divisor n+1, mesh 1/2;
  // traces tau_n = induced(phi_n^N, top).
  static Sequence build(const PrimePair& seed, long stages, const DiffuseMeasure& top);

  long size() const { return long(stages_.size()); }
  const Stage& stage(long n) const;                 // 1-based
  const DiagMorphism& step(long n) const;           // n -> n+1
  const DiagMorphism& composite(long n, long m) const;  // phi_n^m, cached; identity when n == m
  const PrimePair& seed() const { return seed_; }
  const DiffuseMeasure& top_measure() const { return top_; }

  // Rebuild with more stages (same seed, same top-measure kind anchored at
  // the new top): traces below change — see the decisions notes.
  Sequence extended(long stages) const;

  struct Audit {
    bool dagger_diameters = false;  // composite diameters <= 2^{-(m-n)}
    bool dagger_ordered = false;    // stored composite families pointwise ordered
    bool ddagger = false;           // m | p_m q_m
    bool trace_coherent = false;    // tau_n == induced(phi_n^m, tau_m), exact
    Rat max_kappa{0};               // worst composite presentation defect
    bool pass() const { return dagger_diameters && dagger_ordered && ddagger && trace_coherent; }
  };
  Audit audit() const;

 private:
  PrimePair seed_{1, 1};
  DiffuseMeasure top_;
  std::vector<Stage> stages_;
  std::vector<DiagMorphism> steps_;
  mutable std::map<std::pair<long, long>, DiagMorphism> cache_;
};

// delta = eps / max Lipschitz constant of F, capped at 1; exact rational.
Rat modulus_delta(const std::vector<DDElement>& F, const Rat& eps);

// Exact path-matching check: max_r sup|xi_r - zeta_r| < delta. On failure
// returns the witness data of the counting argument (index j, point t,
// c = min xi_{j+1}, d = max zeta_j).
struct MatchingWitness {
  Int index;
  Rat t, c, d;
};
std::pair<bool, std::optional<MatchingWitness>> verify_path_matching(const PathFamily& xi,
                                                                     const PathFamily& zeta,
                                                                     const Rat& delta);

// A probe element tracked symbolically from its root corpus element: the
// current-stage element is Ad_(chain conj) diag(root ∘ chain paths).
struct Probe {
  std::string id;
  DDElement root;          // corpus element at the root stage
  PathFamily chain;        // root stage -> current stage (identity when fresh)
  Rat chain_kappa{0};      // accumulated presentation defects along the chain
  Rat chain_rate{0};       // conjugator rate bound accumulated along the chain

  static Probe fresh(std::string id, DDElement root);
  Probe pushed(const std::string& tag, const DiagMorphism& m) const;
};

struct ProbeRecord {
  std::string id;
  Rat lipschitz;     // of the root element
  Rat defect_upper;  // certified bound on the round defect at this probe
};

struct RoundRecord {
  long n = 0, m = 0;              // response indices
  std::optional<long> k, l;       // weak-schedule indices
  char side = 'A';                // which sequence answered
  PathFamily xi;                  // reference composite family (phi_n^m)
  PathFamily zeta;                // challenge-response composite family
  Rat kappa{0};                   // presentation defects of the two sides
  Rat delta{0};                   // modulus delta for the round
  Rat delta_eff{0};               // provable matching bound (diameter sums)
  Rat matching{0};                // exact sup matching
  bool matching_lt_delta = false;
  Rat budget{0};
  std::vector<ProbeRecord> probes;
  std::vector<std::string> probe_growth;  // structural audit notes
};

struct Certificate {
  std::string kind;
  std::vector<RoundRecord> rounds;
  Rat total_budget{0};
  Rat total_defect{0};
  bool pass = false;
};

struct AmalgamationResult {
  long m = 0;
  DiagMorphism eta;
  Certificate cert;
};

// Near-amalgamation responder: given a trace-preserving ordered challenge
// gamma from stage n into (Z_{p,q}, sigma), returns eta into a later stage m
// with measured defect against phi_n^m below 3*eps on every probe.
AmalgamationResult amalgamate(Sequence& seq, long n, const std::vector<Probe>& F, const Rat& eps,
                              const DiagMorphism& gamma, const DiffuseMeasure& sigma,
                              long min_stage = 0, long max_stage = 9);

std::vector<Probe> corpus_probes(const DDAlgebra& alg, long stage_index);

// Back-and-forth intertwining with budgets eps_i = eps * 2^{-i}.
Certificate intertwine(Sequence& seqA, Sequence& seqB, int rounds, const Rat& eps);

// Weak variant with the four-index schedule n_i <= k_i < n_{i+1},
// m_i <= l_i < m_{i+1}.
Certificate weak_intertwine(Sequence& seqA, Sequence& seqB, int rounds, const Rat& eps);

struct VerifyReport {
  bool pass = false;
  std::vector<std::string> failures;
};
// Recomputes every recorded matching and defect bound from the serialized
// families and probe identifiers; independent of the emitting code path.
VerifyReport verify_certificate(const Certificate& cert, const Sequence& seqA,
                                const Sequence& seqB);

}  // namespace dd
