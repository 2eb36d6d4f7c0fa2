// Copyright 2026 The vqopt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// AVX2 + FMA kernels. This translation unit is compiled with -mavx2 -mfma, so
// it must not instantiate inline library templates (std::vector, std::array,
// <cmath> wrappers, ...): the linker may fold those copies into baseline
// code paths. Only intrinsics, compiler builtins and file-local functions.

#include "vqopt/simd/kernels.hpp"

#if defined(VQOPT_HAVE_AVX2_TU)

#include <immintrin.h>

#include <new>

namespace vqopt::simd {
namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kInvTwoPi = 0.159154943091895335768883763372514;
constexpr double kLn2Hi = 6.93147180369123816490e-01;
constexpr double kLn2Lo = 1.90821492927058770002e-10;
constexpr double kSqrt2 = 1.41421356237309504880;

inline __m256d alternating_sign() { return _mm256_setr_pd(1.0, -1.0, 1.0, -1.0); }

// (re, im, re, im) -> (im, re, im, re)
inline __m256d swap_re_im(__m256d v) { return _mm256_permute_pd(v, 0b0101); }

inline double hsum(__m256d v) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, v);
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

inline double parity_sign(std::uint64_t v) { return (__builtin_popcountll(v) & 1) ? -1.0 : 1.0; }

struct SinCos {
  __m256d sin;
  __m256d cos;
};

// sin(2 pi t), cos(2 pi t). The reduction is carried out in turns, which is
// exact for t in [0, 1); Taylor polynomials on [-pi/4, pi/4] are accurate to
// below one ulp there.
inline SinCos sincos_turns(__m256d t) {
  constexpr int kNearest = _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC;
  const __m256d u = _mm256_sub_pd(t, _mm256_round_pd(t, kNearest));
  const __m256d q = _mm256_round_pd(_mm256_mul_pd(u, _mm256_set1_pd(4.0)), kNearest);
  const __m256d r = _mm256_fnmadd_pd(q, _mm256_set1_pd(0.25), u);
  const __m256d x = _mm256_mul_pd(r, _mm256_set1_pd(kTwoPi));
  const __m256d x2 = _mm256_mul_pd(x, x);

  __m256d sp = _mm256_set1_pd(-1.0 / 1307674368000.0);
  sp = _mm256_fmadd_pd(sp, x2, _mm256_set1_pd(1.0 / 6227020800.0));
  sp = _mm256_fmadd_pd(sp, x2, _mm256_set1_pd(-1.0 / 39916800.0));
  sp = _mm256_fmadd_pd(sp, x2, _mm256_set1_pd(1.0 / 362880.0));
  sp = _mm256_fmadd_pd(sp, x2, _mm256_set1_pd(-1.0 / 5040.0));
  sp = _mm256_fmadd_pd(sp, x2, _mm256_set1_pd(1.0 / 120.0));
  sp = _mm256_fmadd_pd(sp, x2, _mm256_set1_pd(-1.0 / 6.0));
  const __m256d sin_x = _mm256_fmadd_pd(_mm256_mul_pd(sp, x2), x, x);

  __m256d cp = _mm256_set1_pd(1.0 / 20922789888000.0);
  cp = _mm256_fmadd_pd(cp, x2, _mm256_set1_pd(-1.0 / 87178291200.0));
  cp = _mm256_fmadd_pd(cp, x2, _mm256_set1_pd(1.0 / 479001600.0));
  cp = _mm256_fmadd_pd(cp, x2, _mm256_set1_pd(-1.0 / 3628800.0));
  cp = _mm256_fmadd_pd(cp, x2, _mm256_set1_pd(1.0 / 40320.0));
  cp = _mm256_fmadd_pd(cp, x2, _mm256_set1_pd(-1.0 / 720.0));
  cp = _mm256_fmadd_pd(cp, x2, _mm256_set1_pd(1.0 / 24.0));
  cp = _mm256_fmadd_pd(cp, x2, _mm256_set1_pd(-0.5));
  const __m256d cos_x = _mm256_fmadd_pd(cp, x2, _mm256_set1_pd(1.0));

  // Quadrant q mod 4 in {0, 1, 2, 3}.
  const __m256d four = _mm256_set1_pd(4.0);
  const __m256d qm = _mm256_fnmadd_pd(
      _mm256_floor_pd(_mm256_mul_pd(q, _mm256_set1_pd(0.25))), four, q);
  const __m256d is1 = _mm256_cmp_pd(qm, _mm256_set1_pd(1.0), _CMP_EQ_OQ);
  const __m256d is2 = _mm256_cmp_pd(qm, _mm256_set1_pd(2.0), _CMP_EQ_OQ);
  const __m256d is3 = _mm256_cmp_pd(qm, _mm256_set1_pd(3.0), _CMP_EQ_OQ);
  const __m256d swap = _mm256_or_pd(is1, is3);
  const __m256d sign_bit = _mm256_set1_pd(-0.0);
  const __m256d neg_cos = _mm256_and_pd(_mm256_or_pd(is1, is2), sign_bit);
  const __m256d neg_sin = _mm256_and_pd(_mm256_or_pd(is2, is3), sign_bit);

  SinCos out;
  out.cos = _mm256_xor_pd(_mm256_blendv_pd(cos_x, sin_x, swap), neg_cos);
  out.sin = _mm256_xor_pd(_mm256_blendv_pd(sin_x, cos_x, swap), neg_sin);
  return out;
}

// Natural log for positive normal doubles.
inline __m256d log_positive(__m256d x) {
  const __m256i bits = _mm256_castpd_si256(x);
  const __m256i mantissa_mask = _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL);
  const __m256i one_bits = _mm256_set1_epi64x(0x3FF0000000000000LL);
  __m256d m = _mm256_castsi256_pd(_mm256_or_si256(_mm256_and_si256(bits, mantissa_mask), one_bits));

  const __m256i biased = _mm256_srli_epi64(bits, 52);
  const __m256i magic = _mm256_set1_epi64x(0x4330000000000000LL);  // 2^52
  __m256d e = _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(biased, magic)),
                            _mm256_set1_pd(4503599627370496.0 + 1023.0));

  const __m256d big = _mm256_cmp_pd(m, _mm256_set1_pd(kSqrt2), _CMP_GT_OQ);
  m = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), big);
  e = _mm256_add_pd(e, _mm256_and_pd(big, _mm256_set1_pd(1.0)));

  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d s = _mm256_div_pd(_mm256_sub_pd(m, one), _mm256_add_pd(m, one));
  const __m256d w = _mm256_mul_pd(s, s);
  __m256d p = _mm256_set1_pd(1.0 / 23.0);
  p = _mm256_fmadd_pd(p, w, _mm256_set1_pd(1.0 / 21.0));
  p = _mm256_fmadd_pd(p, w, _mm256_set1_pd(1.0 / 19.0));
  p = _mm256_fmadd_pd(p, w, _mm256_set1_pd(1.0 / 17.0));
  p = _mm256_fmadd_pd(p, w, _mm256_set1_pd(1.0 / 15.0));
  p = _mm256_fmadd_pd(p, w, _mm256_set1_pd(1.0 / 13.0));
  p = _mm256_fmadd_pd(p, w, _mm256_set1_pd(1.0 / 11.0));
  p = _mm256_fmadd_pd(p, w, _mm256_set1_pd(1.0 / 9.0));
  p = _mm256_fmadd_pd(p, w, _mm256_set1_pd(1.0 / 7.0));
  p = _mm256_fmadd_pd(p, w, _mm256_set1_pd(1.0 / 5.0));
  p = _mm256_fmadd_pd(p, w, _mm256_set1_pd(1.0 / 3.0));
  // log m = 2 s (1 + w p)
  const __m256d two_s = _mm256_add_pd(s, s);
  const __m256d log_m = _mm256_fmadd_pd(_mm256_mul_pd(two_s, w), p, two_s);
  const __m256d low = _mm256_fmadd_pd(e, _mm256_set1_pd(kLn2Lo), log_m);
  return _mm256_fmadd_pd(e, _mm256_set1_pd(kLn2Hi), low);
}

inline __m256i rotl64(__m256i x, int k) {
  return _mm256_or_si256(_mm256_slli_epi64(x, k), _mm256_srli_epi64(x, 64 - k));
}

struct XoshiroLanes {
  __m256i s0, s1, s2, s3;

  __m256i next() {
    const __m256i result = _mm256_add_epi64(rotl64(_mm256_add_epi64(s0, s3), 23), s0);
    const __m256i t = _mm256_slli_epi64(s1, 17);
    s2 = _mm256_xor_si256(s2, s0);
    s3 = _mm256_xor_si256(s3, s1);
    s1 = _mm256_xor_si256(s1, s2);
    s0 = _mm256_xor_si256(s0, s3);
    s2 = _mm256_xor_si256(s2, t);
    s3 = rotl64(s3, 45);
    return result;
  }
};

// Top 52 bits as a double in [1, 2).
inline __m256d unit_interval_from_bits(__m256i bits) {
  return _mm256_castsi256_pd(
      _mm256_or_si256(_mm256_srli_epi64(bits, 12), _mm256_set1_epi64x(0x3FF0000000000000LL)));
}

void box_muller_step(NormalStream& stream, __m256d& cos_out, __m256d& sin_out) {
  auto* words = reinterpret_cast<__m256i*>(stream.state);
  XoshiroLanes g{_mm256_load_si256(words + 0), _mm256_load_si256(words + 1),
                 _mm256_load_si256(words + 2), _mm256_load_si256(words + 3)};
  const __m256i a = g.next();
  const __m256i b = g.next();
  _mm256_store_si256(words + 0, g.s0);
  _mm256_store_si256(words + 1, g.s1);
  _mm256_store_si256(words + 2, g.s2);
  _mm256_store_si256(words + 3, g.s3);

  const __m256d radius_uniform = _mm256_sub_pd(_mm256_set1_pd(2.0), unit_interval_from_bits(a));
  const __m256d turns = _mm256_sub_pd(unit_interval_from_bits(b), _mm256_set1_pd(1.0));
  const __m256d radius =
      _mm256_sqrt_pd(_mm256_mul_pd(_mm256_set1_pd(-2.0), log_positive(radius_uniform)));
  const SinCos sc = sincos_turns(turns);
  cos_out = _mm256_mul_pd(radius, sc.cos);
  sin_out = _mm256_mul_pd(radius, sc.sin);
}

inline __m256d next_normal_vector(NormalStream& stream) {
  if (stream.has_pending) {
    stream.has_pending = false;
    return _mm256_load_pd(stream.pending);
  }
  __m256d c, s;
  box_muller_step(stream, c, s);
  _mm256_store_pd(stream.pending, s);
  stream.has_pending = true;
  return c;
}

void diagonal_phase(double* amps, const double* diag, std::size_t n, double gamma) {
  const __m256d scale = _mm256_set1_pd(gamma * kInvTwoPi);
  const __m256d alt = alternating_sign();
  std::size_t z = 0;
  for (; z + 4 <= n; z += 4) {
    const SinCos sc = sincos_turns(_mm256_mul_pd(_mm256_loadu_pd(diag + z), scale));
    // (c0, c0, c1, c1) and (c2, c2, c3, c3)
    const __m256d c_lo = _mm256_permute4x64_pd(sc.cos, 0x50);
    const __m256d c_hi = _mm256_permute4x64_pd(sc.cos, 0xFA);
    const __m256d s_lo = _mm256_mul_pd(_mm256_permute4x64_pd(sc.sin, 0x50), alt);
    const __m256d s_hi = _mm256_mul_pd(_mm256_permute4x64_pd(sc.sin, 0xFA), alt);
    double* p0 = amps + 2 * z;
    double* p1 = amps + 2 * z + 4;
    const __m256d v0 = _mm256_loadu_pd(p0);
    const __m256d v1 = _mm256_loadu_pd(p1);
    // (re c + im s, im c - re s)
    _mm256_storeu_pd(p0, _mm256_fmadd_pd(v0, c_lo, _mm256_mul_pd(swap_re_im(v0), s_lo)));
    _mm256_storeu_pd(p1, _mm256_fmadd_pd(v1, c_hi, _mm256_mul_pd(swap_re_im(v1), s_hi)));
  }
  for (; z < n; ++z) {
    const double angle = gamma * diag[z];
    const double c = __builtin_cos(angle);
    const double s = __builtin_sin(angle);
    const double re = amps[2 * z], im = amps[2 * z + 1];
    amps[2 * z] = re * c + im * s;
    amps[2 * z + 1] = im * c - re * s;
  }
}

void x_rotation_layer(double* amps, unsigned n_qubits, double beta) {
  const __m256d c = _mm256_set1_pd(__builtin_cos(beta));
  const __m256d s_alt = _mm256_mul_pd(_mm256_set1_pd(__builtin_sin(beta)), alternating_sign());
  const std::size_t n = std::size_t{1} << n_qubits;
  if (n_qubits == 0) return;

  // Qubit 0: both members of a pair share one register.
  for (std::size_t i = 0; i < n; i += 2) {
    const __m256d v = _mm256_loadu_pd(amps + 2 * i);
    const __m256d partner = _mm256_permute4x64_pd(v, 0x1B);  // (im1, re1, im0, re0)
    _mm256_storeu_pd(amps + 2 * i, _mm256_fmadd_pd(c, v, _mm256_mul_pd(s_alt, partner)));
  }
  for (unsigned q = 1; q < n_qubits; ++q) {
    const std::size_t stride = std::size_t{1} << q;
    for (std::size_t base = 0; base < n; base += 2 * stride) {
      for (std::size_t i = base; i < base + stride; i += 2) {
        double* p0 = amps + 2 * i;
        double* p1 = amps + 2 * (i + stride);
        const __m256d v0 = _mm256_loadu_pd(p0);
        const __m256d v1 = _mm256_loadu_pd(p1);
        _mm256_storeu_pd(p0, _mm256_fmadd_pd(c, v0, _mm256_mul_pd(s_alt, swap_re_im(v1))));
        _mm256_storeu_pd(p1, _mm256_fmadd_pd(c, v1, _mm256_mul_pd(s_alt, swap_re_im(v0))));
      }
    }
  }
}

// Loads (a[(w)^flip], a[(w+1)^flip]) for even w.
inline __m256d load_partner_pair(const double* in, std::size_t w, std::uint64_t flip) {
  const std::size_t p0 = w ^ flip;
  if ((flip & 1) == 0) return _mm256_loadu_pd(in + 2 * p0);
  const __m256d v = _mm256_loadu_pd(in + 2 * (p0 - 1));
  return _mm256_permute4x64_pd(v, 0x4E);  // swap the two complexes
}

inline __m256d pair_signs(std::size_t w, PauliMasks masks) {
  const double s0 = parity_sign((w ^ masks.flip) & masks.phase);
  const double s1 = parity_sign(((w + 1) ^ masks.flip) & masks.phase);
  return _mm256_setr_pd(s0, s0, s1, s1);
}

void pauli_rotation(const double* in, double* out, std::size_t n, PauliMasks masks,
                    double theta) {
  const double s = __builtin_sin(theta);
  // kappa = -i s i^y
  double kr = 0.0, ki = 0.0;
  switch (masks.y_count % 4) {
    case 0: ki = -s; break;
    case 1: kr = s; break;
    case 2: ki = s; break;
    default: kr = -s; break;
  }
  const __m256d c = _mm256_set1_pd(__builtin_cos(theta));
  const __m256d k_re = _mm256_set1_pd(kr);
  const __m256d k_im_alt = _mm256_setr_pd(-ki, ki, -ki, ki);
  if (n < 2) {
    out[0] = __builtin_cos(theta) * in[0] + (kr * in[0] - ki * in[1]);
    out[1] = __builtin_cos(theta) * in[1] + (kr * in[1] + ki * in[0]);
    return;
  }
  for (std::size_t w = 0; w < n; w += 2) {
    const __m256d v = _mm256_loadu_pd(in + 2 * w);
    const __m256d partner = _mm256_mul_pd(load_partner_pair(in, w, masks.flip), pair_signs(w, masks));
    const __m256d kp = _mm256_fmadd_pd(partner, k_re, _mm256_mul_pd(swap_re_im(partner), k_im_alt));
    _mm256_storeu_pd(out + 2 * w, _mm256_fmadd_pd(c, v, kp));
  }
}

double diagonal_expectation(const double* amps, const double* diag, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t z = 0;
  for (; z + 4 <= n; z += 4) {
    const __m256d v0 = _mm256_loadu_pd(amps + 2 * z);
    const __m256d v1 = _mm256_loadu_pd(amps + 2 * z + 4);
    // (p0, p2, p1, p3)
    const __m256d prob = _mm256_hadd_pd(_mm256_mul_pd(v0, v0), _mm256_mul_pd(v1, v1));
    const __m256d d = _mm256_permute4x64_pd(_mm256_loadu_pd(diag + z), 0xD8);
    acc = _mm256_fmadd_pd(prob, d, acc);
  }
  double total = hsum(acc);
  for (; z < n; ++z) {
    total += (amps[2 * z] * amps[2 * z] + amps[2 * z + 1] * amps[2 * z + 1]) * diag[z];
  }
  return total;
}

double pauli_expectation(const double* amps, std::size_t n, PauliMasks masks) {
  __m256d acc_r = _mm256_setzero_pd();
  __m256d acc_i = _mm256_setzero_pd();
  const __m256d alt = alternating_sign();
  if (n < 2) {
    const double norm = amps[0] * amps[0] + amps[1] * amps[1];
    return (masks.y_count % 4 == 0) ? norm : (masks.y_count % 4 == 2 ? -norm : 0.0);
  }
  for (std::size_t w = 0; w < n; w += 2) {
    const __m256d a = _mm256_loadu_pd(amps + 2 * w);
    const __m256d b = _mm256_mul_pd(load_partner_pair(amps, w, masks.flip), pair_signs(w, masks));
    acc_r = _mm256_fmadd_pd(a, b, acc_r);                                 // ar br, ai bi
    acc_i = _mm256_fmadd_pd(_mm256_mul_pd(a, alt), swap_re_im(b), acc_i);  // ar bi, -ai br
  }
  const double sr = hsum(acc_r);
  const double si = hsum(acc_i);
  switch (masks.y_count % 4) {
    case 0: return sr;
    case 1: return -si;
    case 2: return -sr;
    default: return si;
  }
}

void probabilities(const double* amps, double* out, std::size_t n) {
  std::size_t z = 0;
  for (; z + 4 <= n; z += 4) {
    const __m256d v0 = _mm256_loadu_pd(amps + 2 * z);
    const __m256d v1 = _mm256_loadu_pd(amps + 2 * z + 4);
    const __m256d prob = _mm256_hadd_pd(_mm256_mul_pd(v0, v0), _mm256_mul_pd(v1, v1));
    _mm256_storeu_pd(out + z, _mm256_permute4x64_pd(prob, 0xD8));
  }
  for (; z < n; ++z) out[z] = amps[2 * z] * amps[2 * z] + amps[2 * z + 1] * amps[2 * z + 1];
}

void normal_vectors(NormalStream& stream, double* out, std::size_t vectors) {
  for (std::size_t v = 0; v < vectors; ++v) _mm256_storeu_pd(out + 4 * v, next_normal_vector(stream));
}

void policy_moments(const PolicyModel& model, NormalStream& stream, std::size_t samples,
                    PolicyMoments& moments) {
  const std::size_t d = model.dim;
  // z, u and four accumulators per dimension, plus the value accumulator.
  const std::size_t slots = 6 * d + 1;
  auto* scratch = static_cast<__m256d*>(
      ::operator new(slots * sizeof(__m256d), std::align_val_t{32}));
  __m256d* z = scratch;
  __m256d* u = z + d;
  __m256d* acc_z = u + d;
  __m256d* acc_zg = acc_z + d;
  __m256d* acc_z2 = acc_zg + d;
  __m256d* acc_z2g = acc_z2 + d;
  __m256d* acc_g = acc_z2g + d;
  for (std::size_t i = 2 * d; i < slots; ++i) scratch[i] = _mm256_setzero_pd();

  const __m256d lane_index = _mm256_setr_pd(0.0, 1.0, 2.0, 3.0);
  for (std::size_t block = 0; block < samples; block += 4) {
    for (std::size_t j = 0; j < d; ++j) {
      z[j] = next_normal_vector(stream);
      u[j] = _mm256_mul_pd(_mm256_set1_pd(model.sigma[j]), z[j]);
    }
    __m256d value = _mm256_setzero_pd();
    for (std::size_t j = 0; j < d; ++j) {
      __m256d t = _mm256_set1_pd(model.gradient[j]);
      const double* row = model.curvature + j * d;
      for (std::size_t k = 0; k < d; ++k) t = _mm256_fmadd_pd(_mm256_set1_pd(row[k]), u[k], t);
      value = _mm256_fmadd_pd(u[j], t, value);
    }
    const double remaining = static_cast<double>(samples - block);
    const __m256d weight = _mm256_and_pd(
        _mm256_cmp_pd(lane_index, _mm256_set1_pd(remaining), _CMP_LT_OQ), _mm256_set1_pd(1.0));
    value = _mm256_mul_pd(value, weight);
    *acc_g = _mm256_add_pd(*acc_g, value);
    for (std::size_t j = 0; j < d; ++j) {
      const __m256d zj = _mm256_mul_pd(z[j], weight);
      const __m256d z2 = _mm256_mul_pd(zj, z[j]);
      acc_z[j] = _mm256_add_pd(acc_z[j], zj);
      acc_zg[j] = _mm256_fmadd_pd(zj, value, acc_zg[j]);
      acc_z2[j] = _mm256_add_pd(acc_z2[j], z2);
      acc_z2g[j] = _mm256_fmadd_pd(z2, value, acc_z2g[j]);
    }
  }
  moments.sum_value += hsum(*acc_g);
  for (std::size_t j = 0; j < d; ++j) {
    moments.sum_z[j] += hsum(acc_z[j]);
    moments.sum_z_value[j] += hsum(acc_zg[j]);
    moments.sum_z2[j] += hsum(acc_z2[j]);
    moments.sum_z2_value[j] += hsum(acc_z2g[j]);
  }
  ::operator delete(scratch, std::align_val_t{32});
}

const KernelTable kAvx2Table{
    Backend::Avx2,     diagonal_phase, x_rotation_layer, pauli_rotation, diagonal_expectation,
    pauli_expectation, probabilities,  normal_vectors,   policy_moments,
};

}  // namespace

namespace detail {
const KernelTable* avx2_table() { return &kAvx2Table; }
}  // namespace detail

}  // namespace vqopt::simd

#else

namespace vqopt::simd::detail {
const KernelTable* avx2_table() { return nullptr; }
}  // namespace vqopt::simd::detail

#endif
