// End-to-end acceptance checks for the staged denotation pipeline. Each check
// prints exactly one PASS/FAIL line with its runtime; the process exits
// nonzero if any check fails or overruns its time budget.
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "gpm/driver.hpp"
#include "gpm/eval.hpp"
#include "gpm/gen.hpp"
#include "gpm/guarded.hpp"
#include "gpm/props.hpp"
#include "gpm/semantics.hpp"

using namespace gpm;

namespace {

std::string slurp_demo(const std::string& name) {
  std::ifstream in(std::string(GPM_DEMO_DIR) + "/" + name, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// ---------------------------------------------------------------------------
// 1. Unary numbers gain exactly one point per stage, with dagger-epi
//    restrictions: ||mu X . 1 + @X||(n) follows S(0)=1+0, S(n+1)=1+S(n).

bool check_nat_growth(std::string& detail) {
  TypePtr nat = parse_type_string("mu X . 1 + @X");
  auto om = denote_type<Pinj>(nat, {});
  ShapePtr expect = sum_shape(one_shape(), zero_shape());
  for (int n = 0; n <= 4; ++n) {
    if (!shape_eq(om.shape(n), expect) || shape_dim(om.shape(n)) != n + 1) {
      detail = "stage " + std::to_string(n) + " shape " + show_shape(om.shape(n));
      return false;
    }
    expect = sum_shape(one_shape(), expect);
  }
  if (!restrictions_are_dagger_epi(om, 5)) {
    detail = "a restriction is not a dagger epi";
    return false;
  }
  detail = "dims 1..5, shapes follow the recurrence, restrictions epi";
  return true;
}

// ---------------------------------------------------------------------------
// 2. Bit lists in the matrix backend: dim ||mu X . 1 + (1+1) * @X||(n)
//    = 2^{n+1} - 1 for n = 0..6.

bool check_bitlist_dims(std::string& detail) {
  TypePtr lb = parse_type_string("mu X . 1 + (1 + 1) * @X");
  auto om = denote_type<Hilb>(lb, {});
  for (int n = 0; n <= 6; ++n) {
    int64_t want = (int64_t(1) << (n + 1)) - 1;
    int64_t got = shape_dim(om.shape(n));
    if (got != want) {
      detail = "stage " + std::to_string(n) + ": dim " + std::to_string(got) +
               ", expected " + std::to_string(want);
      return false;
    }
  }
  detail = "dims 1,3,7,15,31,63,127";
  return true;
}

// ---------------------------------------------------------------------------
// 3. flip denotes a total involution that is its own dagger, and evaluation
//    agrees with the denotation on every bit list of length <= 4.

ValuePtr vbit(int b) { return b ? v_inr(v_unit()) : v_inl(v_unit()); }

std::vector<ValuePtr> all_bit_lists(int maxlen) {
  std::vector<ValuePtr> out;
  for (int len = 0; len <= maxlen; ++len) {
    for (int64_t bits = 0; bits < (int64_t(1) << len); ++bits) {
      ValuePtr v = v_fold(v_inl(v_unit()));
      for (int i = len - 1; i >= 0; --i)
        v = v_fold(v_inr(v_pair(vbit((bits >> (len - 1 - i)) & 1) /* head-major */,
                                v_next(v))));
      out.push_back(v);
    }
  }
  return out;
}

bool check_flip(std::string& detail) {
  LoadedProgram lp = load_program(prop_corpus());
  Denoter<Pinj> den(lp.globals);
  auto f = den.iso_staged("flip");
  if (!Pinj::eq(f.at(0), Pinj::id(f.src().shape(0)))) {
    detail = "stage 0 is not the identity on the nil-only shape";
    return false;
  }
  for (int n = 1; n <= 4; ++n) {
    PinjMor m = f.at(n);
    if (!Pinj::is_total(m) || !Pinj::is_dagger_iso(m)) {
      detail = "stage " + std::to_string(n) + " is not a total bijection";
      return false;
    }
    if (!Pinj::eq(Pinj::compose(m, m), Pinj::id(m.src))) {
      detail = "stage " + std::to_string(n) + " is not an involution";
      return false;
    }
    if (!Pinj::eq(Pinj::dagger(m), m)) {
      detail = "stage " + std::to_string(n) + " is not self-adjoint";
      return false;
    }
  }
  TypePtr lb = parse_type_string("mu X . 1 + (1 + 1) * @X");
  int agreed = 0;
  for (const ValuePtr& v : all_bit_lists(4)) {
    PinjMor pt = den.point_mor(v, lb, 4);
    PinjMor denoted = Pinj::compose(f.at(4), pt);
    ValuePtr w = apply_iso(lp.globals.at("flip").body, v, 4, lp.globals);
    PinjMor evaluated = den.point_mor(w, lb, 4);
    if (!Pinj::eq(denoted, evaluated)) {
      detail = "evaluator and denotation disagree on " + show_value(v);
      return false;
    }
    ++agreed;
  }
  detail = "total self-adjoint involution; evaluator agreement on " +
           std::to_string(agreed) + " lists";
  return true;
}

// ---------------------------------------------------------------------------
// 4. Mapping not over lists, stage 4, against brute force: every one of the
//    31 stage-4 elements is sent to the same element with every bit flipped.

ElemPtr flip_all_bits(ElemPtr e) {
  if (e->tag == ElemTree::Tag::Inl) return e;  // nil
  ElemPtr cell = e->a;
  ElemPtr bit = cell->a->tag == ElemTree::Tag::Inl ? inr_elem(star_elem())
                                                   : inl_elem(star_elem());
  return inr_elem(pair_elem(bit, flip_all_bits(cell->b)));
}

bool check_mapnot_bruteforce(std::string& detail) {
  LoadedProgram lp = load_program(prop_corpus());
  Denoter<Pinj> den(lp.globals);
  PinjMor got = den.iso_by_name("mapnot", 4);
  ShapePtr s = got.src;
  const auto& es = enumerate_elems(s);
  if (es.size() != 31) {
    detail = "stage-4 shape has " + std::to_string(es.size()) + " elements";
    return false;
  }
  std::vector<std::pair<int64_t, int64_t>> pairs;
  for (size_t i = 0; i < es.size(); ++i)
    pairs.emplace_back((int64_t)i, elem_index(s, flip_all_bits(es[i])));
  PinjMor want = Pinj::from_pairs(s, s, pairs);
  if (!Pinj::eq(got, want)) {
    detail = "denotation differs from the elementwise-not table";
    return false;
  }
  detail = "all 31 elements match the brute-force table";
  return true;
}

// ---------------------------------------------------------------------------
// 5. The Fourier pipeline on length-k lists equals a k-qubit reference
//    transform built two independent ways: a gate-level circuit (Hadamard plus
//    controlled-phase cascade, no final swaps) and the closed form
//    U[bitrev(j), x] = e^{2 pi i j x / N} / sqrt(N), with the list head as the
//    most significant bit.

Eigen::MatrixXcd qft_circuit(int k) {
  const int64_t N = int64_t(1) << k;
  auto bit = [&](int64_t x, int i) { return (x >> (k - 1 - i)) & 1; };
  Eigen::MatrixXcd U = Eigen::MatrixXcd::Identity(N, N);
  for (int i = 0; i < k; ++i) {
    // Hadamard on qubit i
    Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(N, N);
    const double r = 1.0 / std::sqrt(2.0);
    for (int64_t x = 0; x < N; ++x) {
      int64_t x0 = x & ~(int64_t(1) << (k - 1 - i));
      int64_t x1 = x0 | (int64_t(1) << (k - 1 - i));
      G(x0, x) += r;
      G(x1, x) += bit(x, i) ? -r : r;
    }
    U = G * U;
    // controlled phase pi / 2^(j-i) between qubits i and j
    for (int j = i + 1; j < k; ++j) {
      Eigen::MatrixXcd P = Eigen::MatrixXcd::Identity(N, N);
      for (int64_t x = 0; x < N; ++x)
        if (bit(x, i) && bit(x, j))
          P(x, x) = std::polar(1.0, std::numbers::pi / double(int64_t(1) << (j - i)));
      U = P * U;
    }
  }
  return U;
}

Eigen::MatrixXcd qft_analytic(int k) {
  const int64_t N = int64_t(1) << k;
  auto bitrev = [&](int64_t j) {
    int64_t r = 0;
    for (int b = 0; b < k; ++b)
      if (j & (int64_t(1) << b)) r |= int64_t(1) << (k - 1 - b);
    return r;
  };
  Eigen::MatrixXcd U(N, N);
  const double s = 1.0 / std::sqrt(double(N));
  for (int64_t j = 0; j < N; ++j)
    for (int64_t x = 0; x < N; ++x)
      U(bitrev(j), x) =
          std::polar(s, 2.0 * std::numbers::pi * double(j * x) / double(N));
  return U;
}

// bits of a pure cons-chain element (head first); false if it is not one
bool list_bits(ElemPtr e, std::vector<int>& bits) {
  while (e->tag == ElemTree::Tag::Inr) {
    ElemPtr cell = e->a;
    if (cell->tag != ElemTree::Tag::Pair) return false;
    bits.push_back(cell->a->tag == ElemTree::Tag::Inr ? 1 : 0);
    e = cell->b;
  }
  return e->tag == ElemTree::Tag::Inl;
}

bool check_qft(std::string& detail) {
  LoadedProgram lp = load_program(prop_corpus());
  Denoter<Hilb> den(lp.globals);
  double worst = 0.0;
  for (int k = 1; k <= 3; ++k) {
    const int64_t N = int64_t(1) << k;
    Eigen::MatrixXcd circ = qft_circuit(k);
    Eigen::MatrixXcd ana = qft_analytic(k);
    double self = (circ - ana).cwiseAbs().maxCoeff();
    if (self > 1e-9) {
      detail = "k=" + std::to_string(k) +
               ": the two references disagree by " + std::to_string(self);
      return false;
    }
    HilbMor qm = den.iso_by_name("qfthad", k);
    const auto& es = enumerate_elems(qm.src);
    std::vector<int64_t> pos_of_x(N, -1);
    for (size_t i = 0; i < es.size(); ++i) {
      std::vector<int> bits;
      if (!list_bits(es[i], bits) || (int)bits.size() != k) continue;
      int64_t x = 0;
      for (int b = 0; b < k; ++b) x |= int64_t(bits[b]) << (k - 1 - b);
      pos_of_x[x] = (int64_t)i;
    }
    for (int64_t x = 0; x < N; ++x)
      if (pos_of_x[x] < 0) {
        detail = "k=" + std::to_string(k) + ": missing length-k element";
        return false;
      }
    Eigen::MatrixXcd block(N, N);
    for (int64_t r = 0; r < N; ++r)
      for (int64_t c = 0; c < N; ++c)
        block(r, c) = qm.m(pos_of_x[r], pos_of_x[c]);
    double dev = (block - ana).cwiseAbs().maxCoeff();
    worst = std::max(worst, dev);
    if (dev > 1e-9) {
      detail = "k=" + std::to_string(k) + ": block deviates by " +
               std::to_string(dev);
      return false;
    }
  }
  std::ostringstream os;
  os << "k=1,2,3 blocks match both references, worst deviation " << worst;
  detail = os.str();
  return true;
}

// ---------------------------------------------------------------------------
// 6. The full property-suite battery at stage bound 6, seed 1.

bool check_property_suites(std::string& detail) {
  PropOptions opt;
  opt.stage_bound = 6;
  opt.seed = 1;
  auto rs = run_prop_suites(opt);
  int64_t pass = 0, fail = 0;
  std::string first;
  for (const auto& r : rs) {
    pass += r.pass;
    fail += r.fail;
    if (r.fail && first.empty())
      first = r.suite + ": " + (r.failures.empty() ? "?" : r.failures[0]);
  }
  if (fail || !all_passed(rs)) {
    detail = std::to_string(fail) + " failures; first: " + first;
    return false;
  }
  detail = std::to_string(pass) + " checks across " +
           std::to_string(rs.size()) + " suites, all passed";
  return true;
}

// ---------------------------------------------------------------------------
// 7. Truncation towers stabilize: for nats, bit lists and random guarded
//    functors, F^m Z agrees at stage j with the recursive type for every
//    m in j+1 .. j+4.

bool check_stabilization(std::string& detail) {
  std::vector<TypePtr> mus = {
      parse_type_string("mu X . 1 + @X"),
      parse_type_string("mu X . 1 + (1 + 1) * @X"),
  };
  Gen g(1);
  for (int i = 0; i < 8; ++i)
    mus.push_back(t_mu("X", gen_functor_body(g, "X", 4)));
  int checked = 0;
  for (const TypePtr& mu : mus) {
    auto om = denote_type<Pinj>(mu, {});
    for (int j = 0; j <= 4; ++j) {
      ShapePtr want = om.shape(j);
      for (int m = j + 1; m <= j + 4; ++m) {
        if (!shape_eq(mu_iterate<Pinj>(mu, {}, m).shape(j), want)) {
          detail = show_type(mu) + " fails at stage " + std::to_string(j) +
                   ", iterate " + std::to_string(m);
          return false;
        }
        ++checked;
      }
    }
  }
  detail = std::to_string(checked) + " (type, stage, iterate) triples stable";
  return true;
}

// ---------------------------------------------------------------------------
// 8. Ill-formed programs are rejected with the right diagnostics, and the
//    delay morphism has no natural dagger.

bool rejects_with(const std::string& src, Errc code) {
  try {
    load_program(src);
  } catch (const CheckError& e) {
    return e.diag.code == code;
  }
  return false;
}

bool check_rejections(std::string& detail) {
  if (!rejects_with(slurp_demo("bad_unguarded.gpm"), Errc::UnguardedMu)) {
    detail = "unguarded recursion was not rejected as such";
    return false;
  }
  if (!rejects_with(slurp_demo("bad_depth.gpm"), Errc::DepthMismatch)) {
    detail = "clause depth imbalance was not rejected as such";
    return false;
  }
  if (!rejects_with(slurp_demo("bad_overlap.gpm"), Errc::OverlappingPatterns)) {
    detail = "overlapping clauses were not rejected as such";
    return false;
  }
  TypePtr nat = parse_type_string("mu X . 1 + @X");
  auto om = denote_type<Pinj>(nat, {});
  if (is_daggerable(next_mor(om), 3)) {
    detail = "the delay morphism should not be daggerable";
    return false;
  }
  detail = "all three rejections fire; delay has no natural dagger";
  return true;
}

}  // namespace

int main() {
  struct Check {
    const char* name;
    double budget_ms;
    bool (*fn)(std::string&);
  };
  const Check checks[] = {
      {"nat-denotation-growth", 1000.0, check_nat_growth},
      {"bitlist-dimension-growth", 1000.0, check_bitlist_dims},
      {"flip-involution-and-agreement", 1000.0, check_flip},
      {"mapnot-bruteforce-stage4", 1000.0, check_mapnot_bruteforce},
      {"qft-reference-match", 10000.0, check_qft},
      {"property-suites", 60000.0, check_property_suites},
      {"shape-stabilization", 5000.0, check_stabilization},
      {"ill-typed-rejection", 5000.0, check_rejections},
  };
  bool all = true;
  for (const Check& c : checks) {
    std::string detail;
    bool ok = false;
    auto t0 = std::chrono::steady_clock::now();
    try {
      ok = c.fn(detail);
    } catch (const CheckError& e) {
      detail = "unexpected diagnostic: " + format_diag(e.diag);
    } catch (const std::exception& e) {
      detail = std::string("unexpected exception: ") + e.what();
    }
    auto t1 = std::chrono::steady_clock::now();
    double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    if (ms > c.budget_ms) {
      ok = false;
      detail += " [over time budget: " + std::to_string(ms) + " ms > " +
                std::to_string(c.budget_ms) + " ms]";
    }
    std::printf("%s %-32s (%7.1f ms)  %s\n", ok ? "PASS" : "FAIL", c.name, ms,
                detail.c_str());
    all = all && ok;
  }
  return all ? 0 : 1;
}
