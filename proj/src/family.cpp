#include "dd/family.hpp"

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <map>
#include <set>

namespace dd {

PathFamily::PathFamily(std::vector<Run> runs) : runs_(std::move(runs)) {
  if (runs_.empty()) throw std::invalid_argument("PathFamily: empty");
  count_ = 0;
  for (const auto& r : runs_) {
    if (r.mult < 1) throw std::invalid_argument("PathFamily: multiplicity must be >= 1");
    count_ += r.mult;
  }
  // merge adjacent equal runs
  std::vector<Run> merged;
  for (auto& r : runs_) {
    if (!merged.empty() && merged.back().path == r.path)
      merged.back().mult += r.mult;
    else
      merged.push_back(std::move(r));
  }
  runs_ = std::move(merged);
}

bool PathFamily::ordered() const {
  for (size_t i = 0; i + 1 < runs_.size(); ++i)
    if (!runs_[i].path.le(runs_[i + 1].path)) return false;
  return true;
}

bool PathFamily::monotone() const {
  for (const auto& r : runs_)
    if (!r.path.is_monotone_nondecreasing()) return false;
  return true;
}

Rat PathFamily::max_diameter() const {
  Rat best(0);
  for (const auto& r : runs_) best = std::max(best, r.path.image_diameter());
  return best;
}

Rat PathFamily::max_lipschitz() const {
  Rat best(0);
  for (const auto& r : runs_) best = std::max(best, r.path.lipschitz());
  return best;
}

Rat PathFamily::min_value() const {
  Rat best(1);
  for (const auto& r : runs_) best = std::min(best, r.path.min_value());
  return best;
}

Rat PathFamily::max_value() const {
  Rat best(0);
  for (const auto& r : runs_) best = std::max(best, r.path.max_value());
  return best;
}

bool PathFamily::covers_unit_interval() const {
  std::vector<std::pair<Rat, Rat>> iv;
  for (const auto& r : runs_) iv.push_back({r.path.min_value(), r.path.max_value()});
  std::sort(iv.begin(), iv.end());
  if (iv.front().first != 0) return false;
  Rat reach(0);
  for (const auto& [lo, hi] : iv) {
    if (lo > reach) return false;
    reach = std::max(reach, hi);
  }
  return reach == 1;
}

Rat PathFamily::sup_matching(const PathFamily& o) const {
  if (count_ != o.count_) throw std::invalid_argument("sup_matching: family sizes differ (SizeMismatch)");
  Rat best(0);
  size_t a = 0, b = 0;
  Int rem_a = runs_[0].mult, rem_b = o.runs_[0].mult;
  while (a < runs_.size() && b < o.runs_.size()) {
    best = std::max(best, runs_[a].path.sup_distance(o.runs_[b].path));
    Int step = std::min(rem_a, rem_b);
    rem_a -= step;
    rem_b -= step;
    if (rem_a == 0 && ++a < runs_.size()) rem_a = runs_[a].mult;
    if (rem_b == 0 && ++b < o.runs_.size()) rem_b = o.runs_[b].mult;
  }
  return best;
}

const PLPath& PathFamily::at(const Int& index) const {
  Int i = index;
  for (const auto& r : runs_) {
    if (i < r.mult) return r.path;
    i -= r.mult;
  }
  throw std::out_of_range("PathFamily::at");
}

bool PathFamily::operator==(const PathFamily& o) const {
  if (runs_.size() != o.runs_.size()) return false;
  for (size_t i = 0; i < runs_.size(); ++i)
    if (runs_[i].mult != o.runs_[i].mult || !(runs_[i].path == o.runs_[i].path)) return false;
  return true;
}

BoundaryPattern boundary_pattern(const PathFamily& fam, bool at_one) {
  BoundaryPattern pat;
  Int pos = 0;
  for (const auto& r : fam.runs()) {
    Rat v = at_one ? r.path.value_at_1() : r.path.value_at_0();
    BoundaryPattern::Class cls = v == 0   ? BoundaryPattern::Class::Zero
                                 : v == 1 ? BoundaryPattern::Class::One
                                          : BoundaryPattern::Class::Interior;
    if (!pat.cells.empty() && pat.cells.back().value == v)
      pat.cells.back().size += r.mult;
    else
      pat.cells.push_back({pos, r.mult, cls, v});
    pos += r.mult;
  }
  return pat;
}

bool BoundaryPattern::same_structure(const BoundaryPattern& o) const {
  if (cells.size() != o.cells.size()) return false;
  for (size_t i = 0; i < cells.size(); ++i) {
    if (cells[i].start != o.cells[i].start || cells[i].size != o.cells[i].size ||
        cells[i].cls != o.cells[i].cls)
      return false;
  }
  return true;
}

std::string pattern_divisibility_error(const BoundaryPattern& pat, const PrimePair& src,
                                       const PrimePair& tgt, bool at_one) {
  const Int& unit = at_one ? tgt.p : tgt.q;
  for (const auto& c : pat.cells) {
    Int weighted;
    switch (c.cls) {
      case BoundaryPattern::Class::Zero:
        weighted = src.q * c.size;
        break;
      case BoundaryPattern::Class::One:
        weighted = src.p * c.size;
        break;
      default:
        weighted = c.size;  // interior: full matrix variable
    }
    if (weighted % unit != 0) {
      return std::string("endpoint multiplicity violation at x=") + (at_one ? "1" : "0") +
             ": cell of size " + c.size.str() + " (value " + format_rat(c.value) +
             ") has weighted multiplicity " + weighted.str() + " not divisible by " + unit.str();
    }
  }
  return "";
}

namespace {

struct GroupLayout {
  Int ell, r0, s1;
  Int a_count, b_count;  // interior group counts at 0 and 1
};

GroupLayout boundary_layout(const PrimePair& src, const PrimePair& tgt) {
  if (tgt.dim() % src.dim() != 0)
    throw InfeasibleMesh("boundary layout: pq does not divide p'q'");
  GroupLayout g;
  g.ell = tgt.dim() / src.dim();
  Int rho0 = tgt.q / gcd_int(src.q, tgt.q);
  g.r0 = 0;
  for (Int r = rho0; r <= g.ell; r += rho0)
    if ((g.ell - r) % tgt.q == 0) {
      g.r0 = r;
      break;
    }
  if (g.r0 == 0)
    throw InfeasibleMesh("boundary layout: no feasible value-0 group size at x=0 for target (" +
                         tgt.p.str() + "," + tgt.q.str() + ")");
  g.a_count = (g.ell - g.r0) / tgt.q;
  Int sig1 = tgt.p / gcd_int(src.p, tgt.p);
  g.s1 = 0;
  for (Int s = sig1; s <= g.ell; s += sig1)
    if ((g.ell - s) % tgt.p == 0) {
      g.s1 = s;
      break;
    }
  if (g.s1 == 0)
    throw InfeasibleMesh("boundary layout: no feasible value-1 group size at x=1 for target (" +
                         tgt.p.str() + "," + tgt.q.str() + ")");
  g.b_count = (g.ell - g.s1) / tgt.p;
  return g;
}

// Segment walk shared by both family constructors: expanded index intervals
// on which (start group, end group) are constant.
struct Segment {
  Int lo, hi;        // [lo, hi)
  Int start_group;   // 0 = value-0 group, t = interior group t (1-based)
  Int end_group;     // s = interior group s (1-based), b_count+1 = value-1 group
};

std::vector<Segment> segment_walk(const GroupLayout& g, const PrimePair& tgt) {
  std::set<Int> breaks{Int(0), g.ell};
  for (Int t = 0; t <= g.a_count; ++t) {
    Int b = g.r0 + t * tgt.q;
    if (b < g.ell) breaks.insert(b);
  }
  for (Int s = 1; s <= g.b_count; ++s) breaks.insert(s * tgt.p);
  std::vector<Int> bp(breaks.begin(), breaks.end());
  std::vector<Segment> segs;
  for (size_t i = 0; i + 1 < bp.size(); ++i) {
    Segment s;
    s.lo = bp[i];
    s.hi = bp[i + 1];
    s.start_group = s.lo < g.r0 ? Int(0) : Int((s.lo - g.r0) / tgt.q + 1);
    s.end_group = s.lo >= g.b_count * tgt.p ? Int(g.b_count + 1) : Int(s.lo / tgt.p + 1);
    segs.push_back(s);
  }
  return segs;
}

PathFamily build_affine_family(const GroupLayout& g, const PrimePair& tgt,
                               const std::vector<Rat>& us, const std::vector<Rat>& vs) {
  std::vector<PathFamily::Run> runs;
  for (const auto& s : segment_walk(g, tgt)) {
    Rat start = s.start_group == 0 ? Rat(0) : us[size_t(s.start_group.convert_to<long>() - 1)];
    Rat end = s.end_group == g.b_count + 1 ? Rat(1) : vs[size_t(s.end_group.convert_to<long>() - 1)];
    if (start >= end) throw InfeasibleMesh("canonical family: degenerate window");
    runs.push_back({PLPath::affine(start, end), s.hi - s.lo});
  }
  return PathFamily(std::move(runs));
}

void verify_canonical(const PathFamily& fam, const PrimePair& src, const PrimePair& tgt,
                      const Rat& mesh) {
  if (!fam.ordered()) throw InfeasibleMesh("canonical family: not pointwise ordered");
  if (fam.max_diameter() > mesh) throw InfeasibleMesh("canonical family: diameter exceeds mesh");
  if (fam.max_lipschitz() > mesh) throw InfeasibleMesh("canonical family: slope exceeds mesh");
  if (!fam.covers_unit_interval()) throw InfeasibleMesh("canonical family: does not cover [0,1]");
  for (bool at_one : {false, true}) {
    auto err = pattern_divisibility_error(boundary_pattern(fam, at_one), src, tgt, at_one);
    if (!err.empty()) throw InfeasibleMesh("canonical family: " + err);
  }
}

}  // namespace

PathFamily canonical_path_family(const PrimePair& src, const PrimePair& tgt, const Rat& mesh) {
  if (mesh <= 0) throw InfeasibleMesh("canonical_path_family: mesh must be positive");
  GroupLayout g = boundary_layout(src, tgt);
  long A = g.a_count.convert_to<long>(), B = g.b_count.convert_to<long>();
  Rat m = std::min(mesh, Rat(1));
  // primary level assignment: evenly spread, pinned windows of width m
  auto attempt = [&](bool primary) -> PathFamily {
    std::vector<Rat> us, vs;
    for (long t = 1; t <= A; ++t)
      us.push_back(primary ? Rat(t) * (Rat(1) - m) / A : Rat(t, A + 1));
    for (long s = 1; s <= B; ++s)
      vs.push_back(primary ? m + Rat(s - 1) * (Rat(1) - m) / B : Rat(s, B + 1));
    PathFamily fam = build_affine_family(g, tgt, us, vs);
    verify_canonical(fam, src, tgt, mesh);
    return fam;
  };
  try {
    if (m < 1) return attempt(true);
  } catch (const InfeasibleMesh&) {
  }
  return attempt(false);
}

namespace {

// Exact block-transport solver: monotone PL CDFs m_B on [0,ell] with
// sum mu_B m_B(z) = z, m_B pinned to 0 at a_B and 1 at b_B, strictly
// increasing in between, anti-ordered across blocks. Window edges carry a
// half-index slack so that no mass-identity tight cut lands inside a window
// (all cuts at integers, edges at half-integers).
struct Block {
  Int i0, i1;  // natural window [i0, i1)
  Rat a, b;    // pinned window [a, b]
  Int mu() const { return i1 - i0; }
};

struct BlockCdfs {
  std::vector<Rat> zs;                // breakpoints
  std::vector<std::vector<Rat>> m;    // m[block][breakpoint]
};

BlockCdfs solve_transport(const std::vector<Block>& blocks, const Int& ell) {
  std::set<Rat> zset{Rat(0), Rat(ell)};
  for (const auto& b : blocks) {
    zset.insert(Rat(b.i0));
    zset.insert(Rat(b.i1));
    zset.insert(b.a);
    zset.insert(b.b);
  }
  std::vector<Rat> zs(zset.begin(), zset.end());
  size_t nb = blocks.size(), nz = zs.size();
  std::vector<std::vector<Rat>> m(nb, std::vector<Rat>(nz, Rat(0)));

  for (size_t t = 0; t + 1 < nz; ++t) {
    Rat z0 = zs[t], z1 = zs[t + 1];
    Rat h = z1 - z0;
    std::vector<size_t> active, finishing;
    for (size_t b = 0; b < nb; ++b) {
      if (blocks[b].a <= z0 && z1 <= blocks[b].b) {
        active.push_back(b);
        if (blocks[b].b == z1) finishing.push_back(b);
      }
      m[b][t + 1] = m[b][t];  // default carry
    }
    Rat mandatory(0);
    for (size_t b : finishing) mandatory += Rat(blocks[b].mu()) * (Rat(1) - m[b][t]);
    Rat need = h - mandatory;
    if (need < 0) throw std::runtime_error("transport solver: deadline overflow");
    for (size_t b : finishing) m[b][t + 1] = Rat(1);
    std::vector<size_t> open;
    for (size_t b : active)
      if (blocks[b].b != z1) open.push_back(b);
    std::vector<Rat> delta(nb, Rat(0));
    if (open.empty()) {
      if (need != 0) throw std::runtime_error("transport solver: allocation residue");
    } else {
      std::sort(open.begin(), open.end(), [&](size_t x, size_t y) {
        return blocks[x].b != blocks[y].b ? blocks[x].b < blocks[y].b : x < y;
      });
      // Work with the post-piece remainders r_B = mu_B (1 - m_B(z1)):
      //   sum r_B = s := cap_total - need            (mass identity)
      //   prefix sums by deadline <= d_j - z1         (future capacity)
      //   0 < r_B < mu_B (1 - m_B(z0))                (strictness both ways)
      // Assign r latest-deadline-first with theta floors: this minimizes
      // every prefix sum, keeps all blocks strictly moving, and puts later
      // blocks behind earlier ones (anti-ordering).
      Rat cap_total(0);
      std::vector<Rat> prev_rem(nb, Rat(0));
      for (size_t b : open) {
        prev_rem[b] = Rat(blocks[b].mu()) * (Rat(1) - m[b][t]);
        cap_total += prev_rem[b];
      }
      Rat s_after = cap_total - need;
      if (s_after < 0) throw std::runtime_error("transport solver: capacity exceeded");
      if (s_after == 0)
        throw std::runtime_error("transport solver: piece forces open blocks to finish early");
      // deadline classes ascending, with future-capacity rooms d_j - z1
      struct Cls {
        size_t lo, hi;
        Rat room, cap;
      };
      std::vector<Cls> classes;
      for (size_t j = 0; j < open.size();) {
        size_t j2 = j;
        Rat cap(0);
        while (j2 < open.size() && blocks[open[j2]].b == blocks[open[j]].b) {
          cap += prev_rem[open[j2]];
          ++j2;
        }
        // room: future capacity up to this deadline, minus blocks that have
        // not started yet but must fully fit before it
        Rat room = blocks[open[j]].b - z1;
        for (size_t b2 = 0; b2 < nb; ++b2)
          if (blocks[b2].a > z0 && blocks[b2].b <= blocks[open[j]].b) room -= Rat(blocks[b2].mu());
        classes.push_back({j, j2, room, cap});
        j = j2;
      }
      // Post-piece remainders per class: prefix placements S(x) in cumulative
      // capacity coordinates must satisfy S(0) = 0, S(x_end) = s, S <= room
      // bounds, and convexity (nondecreasing per-class contraction = the
      // anti-ordering of the block CDFs). The lower convex hull of the
      // constraint points is the canonical such S.
      size_t ncls = classes.size();
      std::vector<Rat> xs_pts, ys_pts;
      xs_pts.push_back(Rat(0));
      ys_pts.push_back(Rat(0));
      {
        Rat x(0);
        for (size_t j = 0; j + 1 < ncls; ++j) {
          x += classes[j].cap;
          // suffix pin: the cumulative fill of blocks past this deadline is
          // exactly determined when the deadline arrives, so their fill now
          // cannot exceed it: S(x_j) <= s - mu_late + pin(d_j)
          Rat mu_late(0);
          for (size_t u = classes[j].hi; u < open.size(); ++u)
            mu_late += Rat(blocks[open[u]].mu());
          Rat dline = blocks[open[classes[j].lo]].b;
          Rat pin = dline;
          for (size_t b2 = 0; b2 < nb; ++b2)
            if (blocks[b2].b <= dline) pin -= Rat(blocks[b2].mu());
          // strict schedule: the pinned late fill is reached only at the
          // deadline itself, linearly in z
          Rat upper = std::min(std::min(classes[j].room, s_after),
                               Rat(s_after - mu_late + pin * z1 / dline));
          if (upper < 0) throw std::runtime_error("transport solver: negative placement bound");
          xs_pts.push_back(x);
          ys_pts.push_back(upper);
        }
        x += classes[ncls - 1].cap;
        xs_pts.push_back(x);
        ys_pts.push_back(s_after);
      }
      // lower convex hull (monotone chain on exact rationals)
      std::vector<size_t> hull;
      for (size_t i = 0; i < xs_pts.size(); ++i) {
        while (hull.size() >= 2) {
          size_t a = hull[hull.size() - 2], b = hull[hull.size() - 1];
          // drop b if it lies on or above segment a-i
          Rat lhs = (ys_pts[b] - ys_pts[a]) * (xs_pts[i] - xs_pts[a]);
          Rat rhs = (ys_pts[i] - ys_pts[a]) * (xs_pts[b] - xs_pts[a]);
          if (lhs >= rhs)
            hull.pop_back();
          else
            break;
        }
        hull.push_back(i);
      }
      auto hull_eval = [&](const Rat& x) -> Rat {
        for (size_t h2 = 1; h2 < hull.size(); ++h2) {
          if (x <= xs_pts[hull[h2]]) {
            size_t a = hull[h2 - 1], b2 = hull[h2];
            if (xs_pts[b2] == xs_pts[a]) return ys_pts[a];
            return ys_pts[a] +
                   (ys_pts[b2] - ys_pts[a]) * (x - xs_pts[a]) / (xs_pts[b2] - xs_pts[a]);
          }
        }
        return ys_pts.back();
      };
      std::vector<Rat> r(nb, Rat(0));
      {
        Rat x(0), s_prev(0);
        for (size_t j = 0; j < ncls; ++j) {
          x += classes[j].cap;
          Rat s_here = hull_eval(x);
          Rat placed = s_here - s_prev;
          s_prev = s_here;
          if (!(placed > 0 && placed < classes[j].cap)) {
            std::string msg = "transport solver: degenerate class placement piece [" +
                              format_rat(z0) + "," + format_rat(z1) + "] class " +
                              std::to_string(j) + "/" + std::to_string(ncls) + " placed=" +
                              format_rat(placed) + " cap=" + format_rat(classes[j].cap) +
                              " s=" + format_rat(s_after) + " pts=";
            for (size_t u2 = 0; u2 < xs_pts.size(); ++u2)
              msg += "(" + format_rat(xs_pts[u2]) + "," + format_rat(ys_pts[u2]) + ")";
            throw std::runtime_error(msg);
          }
          Rat phi = placed / classes[j].cap;
          for (size_t u = classes[j].lo; u < classes[j].hi; ++u)
            r[open[u]] = phi * prev_rem[open[u]];
        }
      }
      for (size_t b : open) delta[b] = (prev_rem[b] - r[b]) / Rat(blocks[b].mu());
    }
    for (size_t b : open) m[b][t + 1] = m[b][t] + delta[b];
  }

  // exact verification
  for (size_t t = 0; t < nz; ++t) {
    Rat total(0);
    for (size_t b = 0; b < nb; ++b) total += Rat(blocks[b].mu()) * m[b][t];
    if (total != zs[t]) throw std::runtime_error("transport solver: mass identity violated");
  }
  for (size_t b = 0; b < nb; ++b) {
    for (size_t t = 0; t + 1 < nz; ++t) {
      bool inside = blocks[b].a <= zs[t] && zs[t + 1] <= blocks[b].b;
      if (inside && !(m[b][t + 1] > m[b][t]))
        throw std::runtime_error("transport solver: strictness violated");
      if (!inside && m[b][t + 1] != m[b][t])
        throw std::runtime_error("transport solver: allocation outside window");
    }
    if (m[b].back() != 1) throw std::runtime_error("transport solver: block did not finish");
  }
  for (size_t b = 0; b + 1 < nb; ++b)
    for (size_t t = 0; t < nz; ++t)
      if (m[b][t] < m[b + 1][t]) throw std::runtime_error("transport solver: anti-ordering violated");
  return {zs, m};
}

}  // namespace

PathFamily transport_family(const PrimePair& src, const PrimePair& tgt,
                            const DiffuseMeasure& src_measure, const DiffuseMeasure& tgt_measure) {
  GroupLayout g = boundary_layout(src, tgt);
  // refined blocks: intersections of the start partition
  // [r0 | q' | q' ...] with the end partition [p' ... p' | s1]
  std::set<Int> bounds{Int(0), g.ell};
  for (Int t = 0; t <= g.a_count; ++t) {
    Int b = g.r0 + t * tgt.q;
    if (b < g.ell) bounds.insert(b);
  }
  for (Int s = 1; s <= g.b_count; ++s) bounds.insert(s * tgt.p);
  std::vector<Int> bp(bounds.begin(), bounds.end());
  std::vector<Block> blocks;
  for (size_t i = 0; i + 1 < bp.size(); ++i) {
    Block b;
    b.i0 = bp[i];
    b.i1 = bp[i + 1];
    // group-shared pinned values, pushed half an index outward so that the
    // mass identity's integer tight cuts never land inside a window
    Int ga = b.i0 < g.r0 ? Int(0) : Int(g.r0 + (b.i0 - g.r0) / tgt.q * tgt.q);
    Int gb = b.i1 > g.b_count * tgt.p ? g.ell : Int((b.i1 + tgt.p - 1) / tgt.p * tgt.p);
    b.a = ga == 0 ? Rat(0) : Rat(ga) - Rat(1, 2);
    b.b = gb == g.ell ? Rat(g.ell) : Rat(gb) + Rat(1, 2);
    blocks.push_back(b);
  }

  BlockCdfs sol = solve_transport(blocks, g.ell);

  PLPath fq = src_measure.quantile();
  const PLPath& w = tgt_measure.cdf();
  std::vector<PathFamily::Run> runs;
  for (size_t b = 0; b < blocks.size(); ++b) {
    // invert m_B on its window -> g_B : [0,1] -> [a/ell, b/ell]
    std::vector<Rat> xs, ys;
    for (size_t t = 0; t < sol.zs.size(); ++t) {
      Rat z = sol.zs[t];
      if (z < blocks[b].a || z > blocks[b].b) continue;
      if (!xs.empty() && sol.m[b][t] == xs.back()) continue;
      xs.push_back(sol.m[b][t]);
      ys.push_back(z / Rat(g.ell));
    }
    PLPath gb(std::move(xs), std::move(ys));
    PLPath path = compose_paths(fq, compose_paths(gb, w));
    runs.push_back({std::move(path), blocks[b].mu()});
  }
  PathFamily fam(std::move(runs));
  if (!fam.ordered()) throw std::runtime_error("transport_family: output not ordered");
  for (bool at_one : {false, true}) {
    auto err = pattern_divisibility_error(boundary_pattern(fam, at_one), src, tgt, at_one);
    if (!err.empty()) throw std::runtime_error("transport_family: " + err);
  }
  return fam;
}

PLMeasure induced_measure_of_family(const PathFamily& fam, const PLMeasure& tgt_measure) {
  // weighted average of pushforwards, exact
  std::vector<PLMeasure> pushed;
  std::vector<Int> mults;
  for (const auto& r : fam.runs()) {
    pushed.push_back(pushforward(r.path, tgt_measure));
    mults.push_back(r.mult);
  }
  std::vector<const PLPath*> ptrs;
  for (const auto& m : pushed) ptrs.push_back(&m.cdf());
  auto grid = union_breakpoints(ptrs);
  std::vector<Rat> ys;
  ys.reserve(grid.size());
  for (const auto& x : grid) {
    Rat s(0);
    for (size_t i = 0; i < pushed.size(); ++i) s += Rat(mults[i]) * pushed[i].cdf().eval(x);
    ys.push_back(s / Rat(fam.count()));
  }
  return PLMeasure(PLPath(grid, std::move(ys)));
}


Int WeightedPaths::count() const {
  Int c(0);
  for (const auto& m : mults) c += m;
  return c;
}

WeightedPaths compose_raw(const PathFamily& outer_first, const PathFamily& inner_second) {
  WeightedPaths wp;
  for (const auto& ir : inner_second.runs())
    for (const auto& orr : outer_first.runs()) {
      PLPath c = compose_paths(orr.path, ir.path);
      Int mult = orr.mult * ir.mult;
      bool merged = false;
      for (size_t d = 0; d < wp.paths.size(); ++d)
        if (wp.paths[d] == c) {
          wp.mults[d] += mult;
          merged = true;
          break;
        }
      if (!merged) {
        wp.paths.push_back(std::move(c));
        wp.mults.push_back(mult);
      }
    }
  return wp;
}

SortedStatistics order_statistics(const WeightedPaths& wp) {
  size_t d = wp.paths.size();
  if (d == 0) throw std::invalid_argument("order_statistics: empty");
  SortedStatistics out;

  // breakpoints: union of path breakpoints plus all pairwise crossing points
  std::set<Rat> cuts;
  std::vector<const PLPath*> ptrs;
  for (const auto& p : wp.paths) ptrs.push_back(&p);
  for (const auto& x : union_breakpoints(ptrs)) cuts.insert(x);
  std::vector<std::pair<Rat, std::pair<size_t, size_t>>> crossing_pts;
  for (size_t a = 0; a < d; ++a)
    for (size_t b = a + 1; b < d; ++b) {
      auto grid = union_breakpoints({&wp.paths[a], &wp.paths[b]});
      for (size_t t = 0; t + 1 < grid.size(); ++t) {
        Rat f0 = wp.paths[a].eval(grid[t]) - wp.paths[b].eval(grid[t]);
        Rat f1 = wp.paths[a].eval(grid[t + 1]) - wp.paths[b].eval(grid[t + 1]);
        if ((f0 < 0 && f1 > 0) || (f0 > 0 && f1 < 0)) {
          Rat x = grid[t] + (grid[t + 1] - grid[t]) * (-f0) / (f1 - f0);
          cuts.insert(x);
          crossing_pts.push_back({x, {a, b}});
          out.chain = false;
        }
      }
    }
  std::vector<Rat> xs(cuts.begin(), cuts.end());

  // per piece: ranking of the distinct paths by value at the midpoint
  size_t npieces = xs.size() - 1;
  std::vector<std::vector<size_t>> piece_order(npieces);
  for (size_t t = 0; t < npieces; ++t) {
    Rat mid = (xs[t] + xs[t + 1]) / 2;
    std::vector<std::pair<Rat, size_t>> vals;
    for (size_t a = 0; a < d; ++a) vals.push_back({wp.paths[a].eval(mid), a});
    std::stable_sort(vals.begin(), vals.end(),
                     [](const auto& l, const auto& r) { return l.first < r.first; });
    for (const auto& [v, a] : vals) piece_order[t].push_back(a);
  }

  // rank-interval boundaries common to all pieces
  std::set<Int> bset{Int(0)};
  for (size_t t = 0; t < npieces; ++t) {
    Int cum(0);
    for (size_t a : piece_order[t]) {
      cum += wp.mults[a];
      bset.insert(cum);
    }
  }
  std::vector<Int> bounds(bset.begin(), bset.end());

  // assemble one pieced path per rank block
  std::vector<PathFamily::Run> runs;
  for (size_t rb = 0; rb + 1 < bounds.size(); ++rb) {
    const Int& lo = bounds[rb];
    // which distinct path occupies this rank block on each piece
    std::vector<size_t> assign(npieces);
    for (size_t t = 0; t < npieces; ++t) {
      Int cum(0);
      size_t who = piece_order[t].back();
      for (size_t a : piece_order[t]) {
        if (lo < cum + wp.mults[a]) {
          who = a;
          break;
        }
        cum += wp.mults[a];
      }
      assign[t] = who;
    }
    // breakpoints: piece cuts plus the assigned paths' own breakpoints
    std::set<Rat> pbs(xs.begin(), xs.end());
    for (size_t t = 0; t < npieces; ++t)
      for (const auto& bx : wp.paths[assign[t]].xs())
        if (bx >= xs[t] && bx <= xs[t + 1]) pbs.insert(bx);
    std::vector<Rat> pxs(pbs.begin(), pbs.end()), pys;
    pys.reserve(pxs.size());
    for (const auto& px : pxs) {
      size_t t = 0;
      while (t + 1 < npieces && px >= xs[t + 1]) ++t;
      // at piece boundaries the crossing paths agree, so either side works
      pys.push_back(wp.paths[assign[t]].eval(px));
    }
    runs.push_back({PLPath(std::move(pxs), std::move(pys)), bounds[rb + 1] - lo});
  }
  out.family = PathFamily(std::move(runs));
  if (!out.family.ordered())
    throw std::logic_error("order_statistics: output not ordered (engine invariant)");

  // crossing gap bounds over blend windows (quarter of the local cut spacing)
  for (const auto& [cx, pair] : crossing_pts) {
    auto it = std::lower_bound(xs.begin(), xs.end(), cx);
    Rat left = it == xs.begin() ? Rat(0) : *(it - 1);
    Rat right = (it + 1) == xs.end() ? Rat(1) : *(it + 1);
    Rat h = std::min(Rat(cx - left), Rat(right - cx)) / 2;
    Rat lo = cx - h, hi = cx + h;
    // exact sup of |f - g| over [lo, hi]: attained at interval ends or interior bps
    const PLPath &f = wp.paths[pair.first], &g = wp.paths[pair.second];
    Rat gap(0);
    auto grid = union_breakpoints({&f, &g});
    auto consider = [&](const Rat& x) {
      Rat v = f.eval(x) - g.eval(x);
      if (v < 0) v = -v;
      gap = std::max(gap, v);
    };
    consider(lo);
    consider(hi);
    for (const auto& bx : grid)
      if (bx > lo && bx < hi) consider(bx);
    out.crossings.push_back({cx, h, gap});
  }
  return out;
}

}  // namespace dd
