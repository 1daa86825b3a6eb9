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

#include "rfslab/group.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#ifndef RFSLAB_DATA_DIR
#define RFSLAB_DATA_DIR "data"
#endif

namespace rfslab {

namespace {

[[noreturn]] void bad_group(const std::string &name, const std::string &why) {
    fail(ErrorKind::InvalidGroupData, "group " + name + ": " + why);
}

}  // namespace

GroupSpec::GroupSpec(std::string name, std::vector<std::vector<unsigned>> mult_table, std::vector<Irrep> irreps)
    : name_(std::move(name)), table_(std::move(mult_table)), irreps_(std::move(irreps)) {
    validate();
}

void GroupSpec::validate() {
    const size_t n = table_.size();
    if (n == 0) {
        bad_group(name_, "empty multiplication table");
    }
    for (const auto &row : table_) {
        if (row.size() != n) {
            bad_group(name_, "multiplication table is not square");
        }
        for (unsigned v : row) {
            if (v >= n) {
                bad_group(name_, "multiplication table entry out of range");
            }
        }
    }
    // Identity.
    bool found = false;
    for (size_t e = 0; e < n && !found; ++e) {
        bool ok = true;
        for (size_t g = 0; g < n && ok; ++g) {
            ok = table_[e][g] == g && table_[g][e] == g;
        }
        if (ok) {
            identity_ = e;
            found = true;
        }
    }
    if (!found) {
        bad_group(name_, "no identity element");
    }
    // Inverses.
    inverse_.assign(n, n);
    for (size_t g = 0; g < n; ++g) {
        for (size_t h = 0; h < n; ++h) {
            if (table_[g][h] == identity_ && table_[h][g] == identity_) {
                inverse_[g] = h;
                break;
            }
        }
        if (inverse_[g] == n) {
            bad_group(name_, "element " + std::to_string(g) + " has no inverse");
        }
    }
    // Associativity, exhaustive (|G|^3 is small for every group we ship).
    if (n <= 512) {
        for (size_t a = 0; a < n; ++a) {
            for (size_t b = 0; b < n; ++b) {
                const unsigned ab = table_[a][b];
                for (size_t c = 0; c < n; ++c) {
                    if (table_[ab][c] != table_[a][table_[b][c]]) {
                        bad_group(name_, "multiplication is not associative");
                    }
                }
            }
        }
    }
    // Irreps.
    size_t dim_sq = 0;
    for (const auto &ir : irreps_) {
        const unsigned d = ir.dim;
        if (d == 0 || ir.matrices.size() != n) {
            bad_group(name_, "irrep " + ir.label + " needs one matrix per element");
        }
        dim_sq += size_t{d} * d;
        for (size_t g = 0; g < n; ++g) {
            const auto &m = ir.matrices[g];
            if (m.size() != size_t{d} * d) {
                bad_group(name_, "irrep " + ir.label + " matrix has wrong size");
            }
            for (unsigned r = 0; r < d; ++r) {
                for (unsigned c = 0; c < d; ++c) {
                    cplx acc = 0.0;
                    for (unsigned k = 0; k < d; ++k) {
                        acc += std::conj(m[k * d + r]) * m[k * d + c];
                    }
                    if (std::abs(acc - (r == c ? 1.0 : 0.0)) > 1e-12) {
                        bad_group(name_, "irrep " + ir.label + " is not unitary at element " + std::to_string(g));
                    }
                }
            }
        }
        for (size_t g = 0; g < n; ++g) {
            for (size_t h = 0; h < n; ++h) {
                const auto &mg = ir.matrices[g];
                const auto &mh = ir.matrices[h];
                const auto &mgh = ir.matrices[table_[g][h]];
                for (unsigned r = 0; r < d; ++r) {
                    for (unsigned c = 0; c < d; ++c) {
                        cplx acc = 0.0;
                        for (unsigned k = 0; k < d; ++k) {
                            acc += mg[r * d + k] * mh[k * d + c];
                        }
                        if (std::abs(acc - mgh[r * d + c]) > 1e-10) {
                            bad_group(name_, "irrep " + ir.label + " is not a homomorphism");
                        }
                    }
                }
            }
        }
    }
    if (dim_sq != n) {
        bad_group(name_, "sum of squared irrep dimensions is " + std::to_string(dim_sq) + ", expected " +
                             std::to_string(n));
    }
}

size_t GroupSpec::dimension_sum() const {
    size_t s = 0;
    for (const auto &ir : irreps_) {
        s += ir.dim;
    }
    return s;
}

bool GroupSpec::is_abelian() const {
    for (size_t g = 0; g < order(); ++g) {
        for (size_t h = 0; h < g; ++h) {
            if (table_[g][h] != table_[h][g]) {
                return false;
            }
        }
    }
    return true;
}

GroupSpec cyclic_group(size_t n) {
    if (n < 1) {
        fail(ErrorKind::InvalidConfig, "cyclic_group: order must be positive");
    }
    std::vector<std::vector<unsigned>> table(n, std::vector<unsigned>(n));
    for (size_t a = 0; a < n; ++a) {
        for (size_t b = 0; b < n; ++b) {
            table[a][b] = static_cast<unsigned>((a + b) % n);
        }
    }
    std::vector<Irrep> irreps;
    irreps.reserve(n);
    for (size_t j = 0; j < n; ++j) {
        Irrep ir{"chi" + std::to_string(j), 1, {}};
        ir.matrices.reserve(n);
        for (size_t k = 0; k < n; ++k) {
            // Reduce jk mod N first so the phase stays exact for large N.
            const double ang = 2.0 * kPi * static_cast<double>((j * k) % n) / static_cast<double>(n);
            ir.matrices.push_back({std::polar(1.0, ang)});
        }
        irreps.push_back(std::move(ir));
    }
    return {"Z" + std::to_string(n), std::move(table), std::move(irreps)};
}

GroupSpec elementary_abelian_group(unsigned k) {
    if (k < 1 || k > 10) {
        fail(ErrorKind::InvalidConfig, "elementary_abelian_group: k must be in [1, 10]");
    }
    const size_t n = size_t{1} << k;
    std::vector<std::vector<unsigned>> table(n, std::vector<unsigned>(n));
    for (size_t a = 0; a < n; ++a) {
        for (size_t b = 0; b < n; ++b) {
            table[a][b] = static_cast<unsigned>(a ^ b);
        }
    }
    std::vector<Irrep> irreps;
    for (size_t a = 0; a < n; ++a) {
        Irrep ir{"chi" + std::to_string(a), 1, {}};
        for (size_t x = 0; x < n; ++x) {
            ir.matrices.push_back({__builtin_popcountll(a & x) % 2 ? -1.0 : 1.0});
        }
        irreps.push_back(std::move(ir));
    }
    return {"Z2^" + std::to_string(k), std::move(table), std::move(irreps)};
}

GroupSpec group_from_json(const nlohmann::json &doc) {
    try {
        const std::string name = doc.at("name").get<std::string>();
        const auto order = doc.at("order").get<size_t>();
        auto table = doc.at("mult_table").get<std::vector<std::vector<unsigned>>>();
        if (table.size() != order) {
            bad_group(name, "order does not match the multiplication table");
        }
        std::vector<Irrep> irreps;
        for (const auto &jr : doc.at("irreps")) {
            Irrep ir;
            ir.label = jr.at("label").get<std::string>();
            ir.dim = jr.at("dim").get<unsigned>();
            for (const auto &jm : jr.at("matrices")) {
                std::vector<cplx> m;
                for (const auto &row : jm) {
                    for (const auto &cell : row) {
                        m.emplace_back(cell.at(0).get<double>(), cell.at(1).get<double>());
                    }
                }
                ir.matrices.push_back(std::move(m));
            }
            irreps.push_back(std::move(ir));
        }
        return {name, std::move(table), std::move(irreps)};
    } catch (const nlohmann::json::exception &e) {
        fail(ErrorKind::InvalidGroupData, std::string("group json: ") + e.what());
    }
}

nlohmann::json group_to_json(const GroupSpec &group) {
    nlohmann::json doc;
    doc["name"] = group.name();
    doc["order"] = group.order();
    doc["mult_table"] = group.mult_table();
    auto irreps = nlohmann::json::array();
    for (const auto &ir : group.irreps()) {
        auto mats = nlohmann::json::array();
        for (const auto &m : ir.matrices) {
            auto rows = nlohmann::json::array();
            for (unsigned r = 0; r < ir.dim; ++r) {
                auto row = nlohmann::json::array();
                for (unsigned c = 0; c < ir.dim; ++c) {
                    const cplx z = m[r * ir.dim + c];
                    row.push_back({z.real(), z.imag()});
                }
                rows.push_back(row);
            }
            mats.push_back(rows);
        }
        irreps.push_back({{"label", ir.label}, {"dim", ir.dim}, {"matrices", mats}});
    }
    doc["irreps"] = irreps;
    return doc;
}

GroupSpec load_group(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        fail(ErrorKind::Io, "cannot open group file " + path.string());
    }
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception &e) {
        fail(ErrorKind::InvalidGroupData, "group file " + path.string() + ": " + e.what());
    }
    return group_from_json(doc);
}

std::filesystem::path group_data_dir() {
    if (const char *env = std::getenv("LAB_DATA_DIR")) {
        return std::filesystem::path(env) / "groups";
    }
    return std::filesystem::path(RFSLAB_DATA_DIR) / "groups";
}

GroupSpec builtin_group(const std::string &name) {
    if (name.rfind("Z2^", 0) == 0) {
        return elementary_abelian_group(static_cast<unsigned>(std::stoul(name.substr(3))));
    }
    if (name.size() > 1 && name[0] == 'Z' && name.find_first_not_of("0123456789", 1) == std::string::npos) {
        return cyclic_group(std::stoul(name.substr(1)));
    }
    if (name.size() > 5 && name.ends_with(".json")) {
        return load_group(name);
    }
    const auto path = group_data_dir() / (name + ".json");
    if (!std::filesystem::exists(path)) {
        fail(ErrorKind::InvalidConfig, "unknown group '" + name + "' (looked for " + path.string() + ")");
    }
    return load_group(path);
}

size_t FourierMatrix::row_of(size_t irrep, unsigned i, unsigned j) const {
    size_t row = 0;
    const auto &irreps = group.irreps();
    if (irrep >= irreps.size() || i >= irreps[irrep].dim || j >= irreps[irrep].dim) {
        fail(ErrorKind::Label, "FourierMatrix: no row (" + std::to_string(irrep) + ", " + std::to_string(i) + ", " +
                                   std::to_string(j) + ")");
    }
    for (size_t l = 0; l < irrep; ++l) {
        row += size_t{irreps[l].dim} * irreps[l].dim;
    }
    return row + size_t{i} * irreps[irrep].dim + j;
}

double FourierMatrix::unitarity_error() const {
    const size_t n = size();
    double worst = 0.0;
    for (size_t r = 0; r < n; ++r) {
        for (size_t c = 0; c < n; ++c) {
            cplx acc = 0.0;
            for (size_t k = 0; k < n; ++k) {
                acc += std::conj(entries[k * n + r]) * entries[k * n + c];
            }
            worst = std::max(worst, std::abs(acc - (r == c ? 1.0 : 0.0)));
        }
    }
    return worst;
}

FourierMatrix group_fourier(const GroupSpec &group) {
    const size_t n = group.order();
    FourierMatrix f{group, std::vector<cplx>(n * n), {}};
    f.rows.reserve(n);
    size_t row = 0;
    for (size_t l = 0; l < group.irreps().size(); ++l) {
        const auto &ir = group.irreps()[l];
        const double scale = std::sqrt(static_cast<double>(ir.dim) / static_cast<double>(n));
        for (unsigned i = 0; i < ir.dim; ++i) {
            for (unsigned j = 0; j < ir.dim; ++j) {
                for (size_t g = 0; g < n; ++g) {
                    f.entries[row * n + g] = scale * ir.entry(g, i, j);
                }
                f.rows.push_back({l, i, j});
                ++row;
            }
        }
    }
    if (f.unitarity_error() > 1e-10) {
        bad_group(group.name(), "Fourier matrix is not unitary");
    }
    return f;
}

FourierMatrix qft_cyclic(size_t n) {
    if (n < 2) {
        fail(ErrorKind::InvalidConfig, "qft_cyclic: N must be at least 2");
    }
    return group_fourier(cyclic_group(n));
}

void write_matrix_csv(std::ostream &out, std::span<const cplx> m, size_t rows, size_t cols) {
    char buf[96];
    for (size_t r = 0; r < rows; ++r) {
        for (size_t c = 0; c < cols; ++c) {
            const cplx z = m[r * cols + c];
            std::snprintf(buf, sizeof buf, "%.17g%+.17gj", z.real(), z.imag());
            out << (c ? "," : "") << buf;
        }
        out << '\n';
    }
}

}  // namespace rfslab
