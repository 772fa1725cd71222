// Copyright 2026 The Strategiq Authors
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

#ifndef STRATEGIQ_QUANTIZER_H_
#define STRATEGIQ_QUANTIZER_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "strategiq/distortion.h"
#include "strategiq/gaussian_model.h"

namespace strategiq {

// Cells below this pooled probability are treated as empty.
inline constexpr double kMassFloor = 1e-12;

// theta-parameterized scalar quantizer. Row j holds the M + 1 boundaries
//   -inf = q[j][0] <= q[j][1] <= ... <= q[j][M-1] <= q[j][M] = +inf
// used when theta equals grid node j; cell m of row j is (q[j][m], q[j][m+1]]
// and always carries message label m. Coincident boundaries encode a message
// the encoder never sends for that node.
class Quantizer {
 public:
  Quantizer() = default;

  // Every row split at the same interior boundaries (size M - 1).
  static Quantizer replicated(std::size_t n_rows,
                              std::span<const double> interior);
  // Rows given as interior boundaries only; edges are filled in.
  static Quantizer from_interior(std::size_t levels,
                                 const std::vector<std::vector<double>>& rows);
  // Rows given with their infinite edges; shape is not validated.
  static Quantizer from_rows(std::size_t levels,
                             const std::vector<std::vector<double>>& rows);

  std::size_t levels() const { return levels_; }
  std::size_t rows() const { return rows_; }
  std::size_t stride() const { return levels_ + 1; }

  std::span<double> row(std::size_t j) {
    return {data_.data() + j * stride(), stride()};
  }
  std::span<const double> row(std::size_t j) const {
    return {data_.data() + j * stride(), stride()};
  }
  double lower(std::size_t j, std::size_t m) const { return row(j)[m]; }
  double upper(std::size_t j, std::size_t m) const { return row(j)[m + 1]; }

  std::vector<std::vector<double>> to_rows() const;

  bool operator==(const Quantizer&) const = default;

 private:
  std::size_t levels_ = 0;
  std::size_t rows_ = 0;
  std::vector<double> data_;
};

struct ValidationResult {
  std::vector<std::string> violations;
  // Informational: empty cells and similar legal-but-notable findings.
  std::vector<std::string> notes;

  bool ok() const { return violations.empty(); }
};

ValidationResult validate(const Quantizer& q);
// Also checks that the row count matches the grid.
ValidationResult validate(const Quantizer& q, const ThetaGrid& grid);

// Decoder reconstructions, eavesdropper estimates and pooled cell masses.
struct BestResponses {
  std::vector<double> y;
  std::vector<double> theta_hat;
  std::vector<double> cell_mass;
};

// Conditional partial moments of every (row, cell), row-major.
class CellMoments {
 public:
  CellMoments(const Quantizer& q, const SourceSpec& source,
              const ThetaGrid& grid);

  const PartialMoments& at(std::size_t j, std::size_t m) const {
    return cells_[j * levels_ + m];
  }
  std::size_t levels() const { return levels_; }

 private:
  std::size_t levels_;
  std::vector<PartialMoments> cells_;
};

std::vector<double> decoder_best_response(const Quantizer& q,
                                          const SourceSpec& source,
                                          const ThetaGrid& grid);
std::vector<double> eavesdropper_best_response(const Quantizer& q,
                                               const SourceSpec& source,
                                               const ThetaGrid& grid);
BestResponses best_responses(const Quantizer& q, const SourceSpec& source,
                             const ThetaGrid& grid);
BestResponses best_responses(const Quantizer& q, const ThetaGrid& grid,
                             const CellMoments& moments);

// Exact distortions of (q, br). br need not be the best response to q.
// Throws std::domain_error for negative lambda.
DistortionReport distortions(const Quantizer& q, const BestResponses& br,
                             const SourceSpec& source, const ThetaGrid& grid,
                             double lambda);
DistortionReport distortions(const BestResponses& br, const ThetaGrid& grid,
                             const CellMoments& moments, double lambda);

// Best responses followed by distortions.
DistortionReport evaluate(const Quantizer& q, const SourceSpec& source,
                          const ThetaGrid& grid, double lambda);

}  // namespace strategiq

#endif  // STRATEGIQ_QUANTIZER_H_
