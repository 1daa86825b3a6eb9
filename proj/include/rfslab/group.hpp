// Copyright 2026 The rfslab Authors
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

#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "rfslab/common.hpp"

namespace rfslab {

/// Unitary irreducible representation: one d x d matrix (row-major) per group element.
struct Irrep {
    std::string label;
    unsigned dim = 1;
    std::vector<std::vector<cplx>> matrices;

    cplx entry(size_t g, unsigned r, unsigned c) const { return matrices[g][r * dim + c]; }
};

/// Finite group by multiplication table plus a complete set of unitary irreps.
/// Element 0 need not be the identity; `identity()` finds it.
class GroupSpec {
   public:
    /// Validates the group axioms, irrep unitarity (1e-12), the homomorphism
    /// property (1e-10) and sum d^2 = |G|. Throws InvalidGroupData.
    GroupSpec(std::string name, std::vector<std::vector<unsigned>> mult_table, std::vector<Irrep> irreps);

    const std::string &name() const { return name_; }
    size_t order() const { return table_.size(); }
    unsigned mul(size_t g, size_t h) const { return table_[g][h]; }
    const std::vector<std::vector<unsigned>> &mult_table() const { return table_; }
    const std::vector<Irrep> &irreps() const { return irreps_; }
    size_t identity() const { return identity_; }
    size_t inverse(size_t g) const { return inverse_[g]; }
    /// sum over irreps of d_lambda
    size_t dimension_sum() const;
    bool is_abelian() const;

   private:
    void validate();

    std::string name_;
    std::vector<std::vector<unsigned>> table_;
    std::vector<Irrep> irreps_;
    size_t identity_ = 0;
    std::vector<size_t> inverse_;
};

/// Z_N with characters chi_j(k) = exp(2 pi i jk / N).
GroupSpec cyclic_group(size_t n);
/// Z_2^k with characters (-1)^{a.x}; element index is the bit string.
GroupSpec elementary_abelian_group(unsigned k);

GroupSpec group_from_json(const nlohmann::json &doc);
nlohmann::json group_to_json(const GroupSpec &group);
GroupSpec load_group(const std::filesystem::path &path);

/// "Z<N>", "Z2^<k>", a shipped table name ("S3", "D4", "Q8") or a path to a JSON file.
GroupSpec builtin_group(const std::string &name);
/// Directory holding the shipped group tables.
std::filesystem::path group_data_dir();

/// Fourier transform over G as a |G| x |G| matrix.
///
/// Row (lambda, i, j) and column g hold sqrt(d_lambda / |G|) [lambda(g)]_{ij}.
/// Rows are ordered by irrep (in table order), then i, then j, all 0-based.
struct FourierMatrix {
    struct RowLabel {
        size_t irrep = 0;
        unsigned i = 0;
        unsigned j = 0;
    };

    GroupSpec group;
    std::vector<cplx> entries;
    std::vector<RowLabel> rows;

    size_t size() const { return group.order(); }
    cplx at(size_t row, size_t g) const { return entries[row * size() + g]; }
    size_t row_of(size_t irrep, unsigned i, unsigned j) const;
    /// max |(F^dagger F - I)_{rc}|
    double unitarity_error() const;
};

FourierMatrix group_fourier(const GroupSpec &group);
/// entry(j, k) = omega^{jk} / sqrt(N), omega = exp(2 pi i / N).
FourierMatrix qft_cyclic(size_t n);

/// Row-major CSV, each cell "re+imj" with 17 significant digits.
void write_matrix_csv(std::ostream &out, std::span<const cplx> m, size_t rows, size_t cols);

}  // namespace rfslab
