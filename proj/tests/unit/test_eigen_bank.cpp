// Copyright 2026 The dflux Authors.
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "dfl/eigen_bank.hpp"
#include "dfl/lippmann.hpp"
#include "oracles.hpp"

using namespace dfl;

namespace {
std::filesystem::path scratch(const char* name)
{
    const auto dir = std::filesystem::temp_directory_path() / name;
    std::filesystem::remove_all(dir);
    return dir;
}
}  // namespace

TEST_CASE("bank save and load round trip bit for bit")
{
    const SpatialGrid grid = SpatialGrid::cube(3.0, 9);
    const MomentumGrid kg = MomentumGrid::cartesian({1.5, 0, 0}, 0.5, 2);
    const Potential pot = Potential::gaussian(0.05, 1.0);
    const EigenBank bank = build_bank(pot, kg, grid, 1.0);
    const auto dir = scratch("dfl_test_bank");
    save_bank(bank, dir.string());
    std::ifstream man(dir / "manifest.txt");
    std::string first;
    std::getline(man, first);
    CHECK(first == "DFLEIG-MANIFEST 1");
    const EigenBank back = load_bank(dir.string());
    CHECK(back.grid == bank.grid);
    CHECK(back.potential == bank.potential);
    REQUIRE(back.fields.size() == bank.fields.size());
    for (std::size_t f = 0; f < bank.fields.size(); ++f) {
        CHECK(back.fields[f].k.x == bank.fields[f].k.x);
        CHECK(back.fields[f].record.iterations == bank.fields[f].record.iterations);
        for (std::size_t i = 0; i < grid.size(); ++i) CHECK(norm_s(back.fields[f].zeta[i] - bank.fields[f].zeta[i]) == 0.0);
    }
    CHECK_NOTHROW(check_bank(back, kg, grid, 1.0));
    CHECK_THROWS_AS(check_bank(back, kg, SpatialGrid::cube(3.0, 11), 1.0), Error);
    CHECK_THROWS_AS(check_bank(back, kg, grid, 2.0), Error);
    std::filesystem::remove(dir / "k000000_s1.dfleig");
    CHECK_THROWS_AS(load_bank(dir.string()), Error);
    std::filesystem::remove_all(dir);
}

TEST_CASE("zero-potential transform is exact for momentum spacing pi/L")
{
    const SpatialGrid grid = SpatialGrid::cube(3.0, 13);
    const double dk = pi / grid.L;
    const MomentumGrid kg = MomentumGrid::cartesian({1.0, 0.0, 0.0}, dk, 3);
    const EigenBank bank = build_bank(Potential::zero(), kg, grid, 1.0);
    const double vol = std::pow(2.0 * grid.L, 3) / std::pow(2.0 * pi, 1.5);
    for (std::size_t node : {std::size_t{0}, std::size_t{13}, std::size_t{26}})
        for (int s = 1; s <= 2; ++s) {
            std::vector<Spinor4> psi(grid.size());
            for (std::size_t i = 0; i < grid.size(); ++i) psi[i] = plane_wave(kg.nodes[node], s, 1.0, grid.node(i));
            const auto f = generalized_fourier(grid, psi, bank);
            for (std::size_t j = 0; j < kg.size(); ++j)
                for (int r = 1; r <= 2; ++r) {
                    const cplx v = (r == 1 ? f.f1 : f.f2)[j];
                    const double expect = (j == node && r == s) ? vol : 0.0;
                    CHECK(std::abs(v - expect) <= 1e-12 * vol);
                }
        }
}
