// Copyright 2026 The dflux Authors.
// SPDX-License-Identifier: Apache-2.0
#include "dfl/eigen_bank.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dfl/parallel.hpp"

namespace dfl {

static_assert(std::endian::native == std::endian::little, "bank files are little-endian");

namespace {

constexpr char bank_magic[8] = {'D', 'F', 'L', 'E', 'I', 'G', '\0', '\1'};
constexpr double inv_2pi_32 = 0.063493635934240969;

template <class T>
void put(std::ostream& os, T v)
{
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is, const std::string& path)
{
    T v{};
    if (!is.read(reinterpret_cast<char*>(&v), sizeof(T))) throw Error(ErrorKind::io_error, path + ": truncated");
    return v;
}

std::string field_name(std::size_t node, int s)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "k%06zu_s%d.dfleig", node, s);
    return buf;
}

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_field(const EigenfunctionField& f, const std::string& path)
{
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error(ErrorKind::io_error, "cannot write " + path);
    os.write(bank_magic, 8);
    for (int a = 0; a < 3; ++a) put<double>(os, f.k[a]);
    put<std::uint32_t>(os, static_cast<std::uint32_t>(f.s));
    put<std::uint32_t>(os, static_cast<std::uint32_t>(f.grid.N));
    put<double>(os, f.m);
    put<double>(os, f.grid.L);
    put<std::uint32_t>(os, static_cast<std::uint32_t>(f.record.iterations));
    put<std::uint32_t>(os, f.record.converged ? 1u : 0u);
    put<double>(os, f.record.last_delta);
    put<std::uint64_t>(os, f.zeta.size());
    for (const Spinor4& z : f.zeta)
        for (int c = 0; c < 4; ++c) {
            put<double>(os, z[c].real());
            put<double>(os, z[c].imag());
        }
    if (!os) throw Error(ErrorKind::io_error, "cannot write " + path);
}

EigenfunctionField read_field(const std::string& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error(ErrorKind::io_error, "cannot read " + path);
    char magic[8];
    if (!is.read(magic, 8) || std::memcmp(magic, bank_magic, 8) != 0)
        throw Error(ErrorKind::io_error, path + ": not an eigenfunction file");
    EigenfunctionField f;
    for (int a = 0; a < 3; ++a) {
        const double v = get<double>(is, path);
        if (a == 0) f.k.x = v;
        if (a == 1) f.k.y = v;
        if (a == 2) f.k.z = v;
    }
    f.s = static_cast<int>(get<std::uint32_t>(is, path));
    const int N = static_cast<int>(get<std::uint32_t>(is, path));
    f.m = get<double>(is, path);
    const double L = get<double>(is, path);
    f.grid = SpatialGrid::cube(L, N);
    f.record.iterations = static_cast<int>(get<std::uint32_t>(is, path));
    f.record.converged = get<std::uint32_t>(is, path) != 0;
    f.record.last_delta = get<double>(is, path);
    const auto count = get<std::uint64_t>(is, path);
    if (count != f.grid.size() || (f.s != 1 && f.s != 2))
        throw Error(ErrorKind::io_error, path + ": inconsistent header");
    f.zeta.resize(count);
    for (Spinor4& z : f.zeta)
        for (int c = 0; c < 4; ++c) {
            const double re = get<double>(is, path);
            const double im = get<double>(is, path);
            z[c] = {re, im};
        }
    return f;
}

bool same_nodes(const MomentumGrid& a, const MomentumGrid& b)
{
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (norm(a.nodes[i] - b.nodes[i]) > 1e-12 * (1.0 + norm(a.nodes[i])) ||
            std::abs(a.weights[i] - b.weights[i]) > 1e-12 * (1.0 + std::abs(a.weights[i])))
            return false;
    return true;
}

}  // namespace

int EigenBank::max_iterations() const
{
    int n = 0;
    for (const auto& f : fields) n = std::max(n, f.record.iterations);
    return n;
}

double EigenBank::max_last_delta() const
{
    double d = 0.0;
    for (const auto& f : fields) d = std::max(d, f.record.last_delta);
    return d;
}

EigenBank build_bank(const Potential& pot, const MomentumGrid& kgrid, const SpatialGrid& grid, double m,
                     const LseOptions& opt)
{
    EigenBank bank;
    bank.grid = grid;
    bank.kgrid = kgrid;
    bank.m = m;
    bank.potential = pot.description;
    bank.fields.resize(2 * kgrid.size());
    parallel_for_dynamic(kgrid.size(), [&](std::size_t node) {
        const Vec3& k = kgrid.nodes[node];
        const LseOperator op(grid, pot, norm(k), m);
        for (int s = 1; s <= 2; ++s) bank.fields[2 * node + (s - 1)] = born_solve(op, k, s, opt);
    });
    return bank;
}

void save_bank(const EigenBank& bank, const std::string& dir)
{
    std::filesystem::create_directories(dir);
    const std::filesystem::path base(dir);
    MomentumAmplitude kg = MomentumAmplitude::zero(bank.kgrid, bank.m);
    save_amplitude_binary(kg, (base / "kgrid.dflamp").string());
    std::ostringstream man;
    man << "DFLEIG-MANIFEST 1\n";
    man << "m " << fmt(bank.m) << "\n";
    man << "grid " << fmt(bank.grid.L) << " " << bank.grid.N << "\n";
    man << "potential " << bank.potential << "\n";
    man << "kgrid kgrid.dflamp\n";
    man << "count " << bank.fields.size() << "\n";
    for (std::size_t node = 0; node < bank.nodes(); ++node)
        for (int s = 1; s <= 2; ++s) {
            const std::string name = field_name(node, s);
            write_field(bank.field(node, s), (base / name).string());
            man << node << " " << s << " " << name << "\n";
        }
    std::ofstream os(base / "manifest.txt", std::ios::binary);
    os << man.str();
    if (!os) throw Error(ErrorKind::io_error, "cannot write manifest in " + dir);
}

EigenBank load_bank(const std::string& dir)
{
    const std::filesystem::path base(dir);
    std::ifstream is(base / "manifest.txt");
    if (!is) throw Error(ErrorKind::io_error, "no manifest.txt in " + dir);
    auto fail = [&](const std::string& what) { return Error(ErrorKind::io_error, dir + "/manifest.txt: " + what); };
    std::string line, key;
    if (!std::getline(is, line) || line != "DFLEIG-MANIFEST 1") throw fail("bad header");
    EigenBank bank;
    std::string kgrid_file;
    std::size_t count = 0;
    for (int n = 0; n < 5; ++n) {
        if (!std::getline(is, line)) throw fail("truncated");
        std::istringstream ls(line);
        ls >> key;
        if (key == "m" && (ls >> bank.m)) continue;
        if (key == "grid") {
            double L;
            int N;
            if (ls >> L >> N) {
                bank.grid = SpatialGrid::cube(L, N);
                continue;
            }
        }
        if (key == "potential") {
            bank.potential = line.size() > 10 ? line.substr(10) : "";
            continue;
        }
        if (key == "kgrid" && (ls >> kgrid_file)) continue;
        if (key == "count" && (ls >> count)) continue;
        throw fail("bad line '" + line + "'");
    }
    bank.kgrid = load_amplitude_binary((base / kgrid_file).string()).grid;
    if (count != 2 * bank.kgrid.size()) throw fail("count does not match the momentum grid");
    bank.fields.resize(count);
    std::vector<char> seen(count, 0);
    for (std::size_t n = 0; n < count; ++n) {
        std::size_t node;
        int s;
        std::string name;
        if (!(is >> node >> s >> name) || node >= bank.kgrid.size() || (s != 1 && s != 2)) throw fail("bad entry");
        EigenfunctionField f = read_field((base / name).string());
        if (!(f.grid == bank.grid) || f.m != bank.m || f.s != s)
            throw Error(ErrorKind::bank_mismatch, name + " does not match the manifest grid, mass or spin");
        if (norm(f.k - bank.kgrid.nodes[node]) > 1e-12 * (1.0 + norm(f.k)))
            throw Error(ErrorKind::bank_mismatch, name + " was solved at another momentum");
        const std::size_t at = 2 * node + (s - 1);
        bank.fields[at] = std::move(f);
        seen[at] = 1;
    }
    for (char c : seen)
        if (!c) throw fail("missing entries");
    return bank;
}

void check_bank(const EigenBank& bank, const MomentumGrid& kgrid, const SpatialGrid& grid, double m)
{
    if (!(bank.grid == grid)) throw Error(ErrorKind::bank_mismatch, "bank spatial grid differs");
    if (bank.m != m) throw Error(ErrorKind::bank_mismatch, "bank mass differs");
    if (!same_nodes(bank.kgrid, kgrid)) throw Error(ErrorKind::bank_mismatch, "bank momentum grid differs");
}

MomentumAmplitude generalized_fourier(const SpatialGrid& grid, std::span<const Spinor4> psi, const EigenBank& bank)
{
    if (!(grid == bank.grid)) throw Error(ErrorKind::bank_mismatch, "state and bank live on different spatial grids");
    if (psi.size() != grid.size()) throw Error(ErrorKind::invalid_argument, "state size does not match the grid");
    MomentumAmplitude out = MomentumAmplitude::zero(bank.kgrid, bank.m);
    std::vector<double> w(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) w[i] = grid.weight(i) * inv_2pi_32;
    parallel_for_dynamic(bank.nodes(), [&](std::size_t node) {
        for (int s = 1; s <= 2; ++s) {
            const EigenfunctionField& f = bank.field(node, s);
            CompensatedSum<cplx> acc;
            for (std::size_t i = 0; i < grid.size(); ++i) acc.add(w[i] * inner(f.phi_tilde(i), psi[i]));
            (s == 1 ? out.f1 : out.f2)[node] = acc.value();
        }
    });
    return out;
}

std::vector<Spinor4> synthesize_state(const MomentumAmplitude& amp, const EigenBank& bank, double t)
{
    check_bank(bank, amp.grid, bank.grid, amp.m);
    const std::size_t nn = bank.grid.size();
    std::vector<Spinor4> out(nn);
    std::vector<std::array<cplx, 2>> c(bank.nodes());
    for (std::size_t node = 0; node < bank.nodes(); ++node) {
        const cplx e = std::polar(amp.grid.weights[node] * inv_2pi_32, -energy(amp.grid.nodes[node], amp.m) * t);
        c[node] = {e * amp.f1[node], e * amp.f2[node]};
    }
    parallel_for(nn, [&](std::size_t i) {
        Spinor4 acc;
        for (std::size_t node = 0; node < bank.nodes(); ++node)
            for (int s = 1; s <= 2; ++s) {
                const cplx a = c[node][s - 1];
                if (a != 0.0) axpy(acc, a, bank.field(node, s).phi_tilde(i));
            }
        out[i] = acc;
    });
    return out;
}

std::vector<Spinor4> synthesize_at(const MomentumAmplitude& amp, const EigenBank& bank, const Potential& pot,
                                   std::span<const Vec3> points, double t)
{
    check_bank(bank, amp.grid, bank.grid, amp.m);
    std::vector<Spinor4> out(points.size());
    const std::size_t nn = bank.grid.size();
    std::vector<double> w(nn);
    std::vector<Vec3> x(nn);
    for (std::size_t i = 0; i < nn; ++i) {
        w[i] = bank.grid.weight(i);
        x[i] = bank.grid.node(i);
    }
    for (std::size_t node = 0; node < bank.nodes(); ++node) {
        const Vec3& k = amp.grid.nodes[node];
        const double E = energy(k, amp.m);
        const auto sp = positive_spinors(k, amp.m);
        const cplx e = std::polar(amp.grid.weights[node] * inv_2pi_32, -E * t);
        const std::array<cplx, 2> c{e * amp.f1[node], e * amp.f2[node]};
        if (c[0] == 0.0 && c[1] == 0.0) continue;
        // Source w' A/ (c1 phi~_1 + c2 phi~_2) shared by every target point.
        std::vector<Spinor4> src(nn);
        if (!pot.is_zero())
            for (std::size_t i = 0; i < nn; ++i) {
                Spinor4 v = c[0] * bank.field(node, 1).phi_tilde(i);
                v += c[1] * bank.field(node, 2).phi_tilde(i);
                src[i] = cplx(w[i]) * pot.apply(x[i], v);
            }
        const double kk = norm(k);
        parallel_for(points.size(), [&](std::size_t p) {
            Spinor4 acc = std::polar(1.0, dot(k, points[p])) * (c[0] * sp.s1 + c[1] * sp.s2);
            if (!pot.is_zero())
                for (std::size_t i = 0; i < nn; ++i) {
                    if (src[i][0] == 0.0 && src[i][1] == 0.0 && src[i][2] == 0.0 && src[i][3] == 0.0) continue;
                    const Vec3 d = points[p] - x[i];
                    const GreenScalars g = (d.x == 0.0 && d.y == 0.0 && d.z == 0.0)
                                               ? GreenScalars{green_self_cell_scalar(kk, bank.grid.h()), {}}
                                               : green_scalars(kk, d);
                    acc += apply_green_structure(E, amp.m, g.g0, g.gj, src[i]);
                }
            out[p] += acc;
        });
    }
    return out;
}

}  // namespace dfl
