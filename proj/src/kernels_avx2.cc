// Copyright 2026 The IPD Lab Authors
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

#include "ipd/kernels.h"

#if defined(__x86_64__) || defined(_M_X64)
#define IPD_HAVE_AVX2_KERNELS 1
#include <immintrin.h>
#else
#define IPD_HAVE_AVX2_KERNELS 0
#endif

namespace ipd::kernels {

#if IPD_HAVE_AVX2_KERNELS

namespace avx2 {
namespace {

#define IPD_AVX2 __attribute__((target("avx2")))

IPD_AVX2 std::uint64_t HorizontalSum(__m256i sad) {
  // _mm256_sad_epu8 leaves four 64-bit partial sums.
  const __m128i lo = _mm256_castsi256_si128(sad);
  const __m128i hi = _mm256_extracti128_si256(sad, 1);
  const __m128i sum = _mm_add_epi64(lo, hi);
  return static_cast<std::uint64_t>(_mm_cvtsi128_si64(sum)) +
         static_cast<std::uint64_t>(_mm_extract_epi64(sum, 1));
}

IPD_AVX2 JointCounts CountJointActions(std::span<const Action> a,
                                       std::span<const Action> b) {
  const std::size_t n = a.size();
  const auto* pa = reinterpret_cast<const std::uint8_t*>(a.data());
  const auto* pb = reinterpret_cast<const std::uint8_t*>(b.data());
  const __m256i zero = _mm256_setzero_si256();
  __m256i sum_a = zero;
  __m256i sum_b = zero;
  __m256i sum_ab = zero;
  std::size_t t = 0;
  for (; t + 32 <= n; t += 32) {
    const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(pa + t));
    const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(pb + t));
    sum_a = _mm256_add_epi64(sum_a, _mm256_sad_epu8(va, zero));
    sum_b = _mm256_add_epi64(sum_b, _mm256_sad_epu8(vb, zero));
    sum_ab = _mm256_add_epi64(sum_ab,
                              _mm256_sad_epu8(_mm256_and_si256(va, vb), zero));
  }
  std::int64_t da = static_cast<std::int64_t>(HorizontalSum(sum_a));
  std::int64_t db = static_cast<std::int64_t>(HorizontalSum(sum_b));
  std::int64_t dd = static_cast<std::int64_t>(HorizontalSum(sum_ab));
  for (; t < n; ++t) {
    da += pa[t];
    db += pb[t];
    dd += pa[t] & pb[t];
  }
  JointCounts counts;
  counts.dd = dd;
  counts.dc = da - dd;
  counts.cd = db - dd;
  counts.cc = static_cast<std::int64_t>(n) - da - db + dd;
  return counts;
}

IPD_AVX2 void AccumulateCooperation(std::span<const Action> moves,
                                    std::span<std::uint32_t> counts) {
  const std::size_t n = moves.size();
  const auto* pm = reinterpret_cast<const std::uint8_t*>(moves.data());
  std::uint32_t* pc = counts.data();
  const __m256i one = _mm256_set1_epi32(1);
  std::size_t t = 0;
  for (; t + 8 <= n; t += 8) {
    const __m128i bytes =
        _mm_loadl_epi64(reinterpret_cast<const __m128i*>(pm + t));
    const __m256i defect = _mm256_cvtepu8_epi32(bytes);
    const __m256i coop = _mm256_xor_si256(defect, one);
    __m256i acc = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(pc + t));
    acc = _mm256_add_epi32(acc, coop);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(pc + t), acc);
  }
  for (; t < n; ++t) pc[t] += pm[t] ^ 1u;
}

IPD_AVX2 double DenseReluOutput(std::span<const double> weights,
                                std::span<const double> bias,
                                std::span<const double> out,
                                std::span<const double, kAnnInputs> x) {
  const __m256d x0 = _mm256_loadu_pd(x.data());
  const __m256d x1 = _mm256_loadu_pd(x.data() + 4);
  const __m256d x2 = _mm256_loadu_pd(x.data() + 8);
  const __m256d x3 = _mm256_loadu_pd(x.data() + 12);
  double total = 0.0;
  for (std::size_t j = 0; j < bias.size(); ++j) {
    const double* w = weights.data() + j * kAnnInputs;
    // No FMA: keeps rounding identical to the scalar reference.
    __m256d acc = _mm256_mul_pd(_mm256_loadu_pd(w), x0);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(w + 4), x1));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(w + 8), x2));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(w + 12), x3));
    alignas(32) double lane[4];
    _mm256_store_pd(lane, acc);
    double s = (lane[0] + lane[1]) + (lane[2] + lane[3]);
    const double tail = w[16] * x[16];
    s = s + tail;
    s = s + bias[j];
    const double h = s > 0.0 ? s : 0.0;
    const double contribution = out[j] * h;
    total = total + contribution;
  }
  return total;
}

#undef IPD_AVX2

}  // namespace
}  // namespace avx2

const KernelTable* Avx2Table() {
  static const KernelTable table{"avx2", &avx2::CountJointActions,
                                 &avx2::AccumulateCooperation,
                                 &avx2::DenseReluOutput};
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &table : nullptr;
}

#else

const KernelTable* Avx2Table() { return nullptr; }

#endif

}  // namespace ipd::kernels
