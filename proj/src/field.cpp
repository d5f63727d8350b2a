#include "qnslab/field.hpp"

#include <cstring>
#include <fstream>

#include "qnslab/fft.hpp"

namespace qnslab {

SpectralField::SpectralField(TorusGrid grid, int components, bool is_real)
    : grid_(grid), components_(components), is_real_(is_real),
      coeffs_(static_cast<std::size_t>(components) * grid.total(), cplx{0.0, 0.0}) {
    require(components >= 1, "SpectralField: components must be >= 1");
}

SpectralField SpectralField::from_samples(const TorusGrid& grid, int components,
                                          const std::vector<double>& samples) {
    require(samples.size() == static_cast<std::size_t>(components) * grid.total(),
            "from_samples: sample count does not match grid shape");
    SpectralField f(grid, components, true);
    std::vector<cplx> buf(grid.total());
    for (int c = 0; c < components; ++c) {
        const double* src = samples.data() + static_cast<std::size_t>(c) * grid.total();
        for (std::size_t i = 0; i < grid.total(); ++i) buf[i] = cplx{src[i], 0.0};
        fft_forward(grid.dim(), grid.n_axis(), buf.data());
        std::copy(buf.begin(), buf.end(),
                  f.coeffs_.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(c) * grid.total()));
    }
    return f;
}

SpectralField SpectralField::from_complex_samples(const TorusGrid& grid, int components,
                                                  const std::vector<cplx>& samples) {
    require(samples.size() == static_cast<std::size_t>(components) * grid.total(),
            "from_complex_samples: sample count does not match grid shape");
    SpectralField f(grid, components, false);
    std::vector<cplx> buf(grid.total());
    for (int c = 0; c < components; ++c) {
        std::copy_n(samples.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(c) * grid.total()),
                    grid.total(), buf.begin());
        fft_forward(grid.dim(), grid.n_axis(), buf.data());
        std::copy(buf.begin(), buf.end(),
                  f.coeffs_.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(c) * grid.total()));
    }
    return f;
}

std::vector<cplx> SpectralField::to_physical_complex() const {
    std::vector<cplx> out(coeffs_.size());
    std::vector<cplx> buf(grid_.total());
    for (int c = 0; c < components_; ++c) {
        std::copy_n(coeffs_.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(c) * grid_.total()),
                    grid_.total(), buf.begin());
        fft_inverse(grid_.dim(), grid_.n_axis(), buf.data());
        std::copy(buf.begin(), buf.end(),
                  out.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(c) * grid_.total()));
    }
    return out;
}

std::vector<double> SpectralField::to_physical() const {
    auto z = to_physical_complex();
    std::vector<double> out(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) out[i] = z[i].real();
    return out;
}

void SpectralField::apply_multiplier(const std::function<cplx(std::size_t)>& m) {
    const std::size_t total = grid_.total();
    for (std::size_t i = 0; i < total; ++i) {
        cplx mi = m(i);
        for (int c = 0; c < components_; ++c) coeff(c, i) *= mi;
    }
}

SpectralField SpectralField::component(int comp) const {
    require(comp >= 0 && comp < components_, "component index out of range");
    SpectralField out(grid_, 1, is_real_);
    std::copy_n(coeffs_.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(comp) * grid_.total()),
                grid_.total(), out.coeffs_.begin());
    return out;
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
    require(grid_ == o.grid_ && components_ == o.components_, "field shape mismatch");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    is_real_ = is_real_ && o.is_real_;
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
    require(grid_ == o.grid_ && components_ == o.components_, "field shape mismatch");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    is_real_ = is_real_ && o.is_real_;
    return *this;
}

SpectralField& SpectralField::operator*=(double c) {
    for (auto& z : coeffs_) z *= c;
    return *this;
}

double SpectralField::hermitian_defect() const {
    double scale = coeff_max();
    if (scale == 0.0) return 0.0;
    double worst = 0.0;
    std::array<std::size_t, 3> idx{};
    std::array<std::size_t, 3> mirror{};
    const std::size_t n = grid_.n_axis();
    for (std::size_t i = 0; i < grid_.total(); ++i) {
        grid_.decode(i, idx);
        for (int d = 0; d < grid_.dim(); ++d)
            mirror[static_cast<std::size_t>(d)] = (n - idx[static_cast<std::size_t>(d)]) % n;
        std::size_t j = grid_.encode(mirror);
        for (int c = 0; c < components_; ++c)
            worst = std::max(worst, std::abs(coeff(c, j) - std::conj(coeff(c, i))));
    }
    return worst / scale;
}

void SpectralField::zero_mean() {
    for (int c = 0; c < components_; ++c) coeff(c, 0) = cplx{0.0, 0.0};
}

double SpectralField::l2_norm() const {
    // Parseval with the physical measure: int |f|^2 dx = L^n sum_k |c_k|^2
    KahanSum s;
    for (const auto& z : coeffs_) s.add(std::norm(z));
    double vol = std::pow(grid_.period(), grid_.dim());
    return std::sqrt(vol * s.value());
}

double SpectralField::linf_norm() const {
    auto phys = to_physical_complex();
    const std::size_t total = grid_.total();
    double worst = 0.0;
    for (std::size_t i = 0; i < total; ++i) {
        double mag2 = 0.0;
        for (int c = 0; c < components_; ++c)
            mag2 += std::norm(phys[static_cast<std::size_t>(c) * total + i]);
        worst = std::max(worst, mag2);
    }
    return std::sqrt(worst);
}

double SpectralField::coeff_max() const {
    double worst = 0.0;
    for (const auto& z : coeffs_) worst = std::max(worst, std::abs(z));
    return worst;
}

cplx SpectralField::dot(const SpectralField& o) const {
    require(grid_ == o.grid_ && components_ == o.components_, "field shape mismatch");
    cplx s{0.0, 0.0};
    for (std::size_t i = 0; i < coeffs_.size(); ++i) s += std::conj(coeffs_[i]) * o.coeffs_[i];
    return s;
}

namespace {
constexpr std::uint32_t kQnsfVersion = 1;

void put_f64(std::ofstream& out, double v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(double));
}
double get_f64(std::ifstream& in) {
    double v = 0.0;
    in.read(reinterpret_cast<char*>(&v), sizeof(double));
    return v;
}
}  // namespace

void write_qnsf(const std::string& path, const SpectralField& field) {
    std::ofstream out(path, std::ios::binary);
    require(static_cast<bool>(out), "write_qnsf: cannot open " + path);
    out.write("QNSF", 4);
    std::uint32_t ver = kQnsfVersion;
    out.write(reinterpret_cast<const char*>(&ver), sizeof(ver));
    put_f64(out, static_cast<double>(field.grid().dim()));
    put_f64(out, static_cast<double>(field.grid().n_axis()));
    put_f64(out, static_cast<double>(field.components()));
    put_f64(out, field.grid().period());
    auto samples = field.to_physical();
    out.write(reinterpret_cast<const char*>(samples.data()),
              static_cast<std::streamsize>(samples.size() * sizeof(double)));
    require(static_cast<bool>(out), "write_qnsf: short write to " + path);
}

SpectralField read_qnsf(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), "read_qnsf: cannot open " + path);
    char magic[4];
    in.read(magic, 4);
    require(in && std::memcmp(magic, "QNSF", 4) == 0, "read_qnsf: bad magic in " + path);
    std::uint32_t ver = 0;
    in.read(reinterpret_cast<char*>(&ver), sizeof(ver));
    require(ver == kQnsfVersion, "read_qnsf: unsupported version");
    int n = static_cast<int>(get_f64(in));
    auto N = static_cast<std::size_t>(get_f64(in));
    int m = static_cast<int>(get_f64(in));
    double L = get_f64(in);
    TorusGrid grid(n, N, L);
    std::vector<double> samples(static_cast<std::size_t>(m) * grid.total());
    in.read(reinterpret_cast<char*>(samples.data()),
            static_cast<std::streamsize>(samples.size() * sizeof(double)));
    require(static_cast<bool>(in), "read_qnsf: truncated sample block in " + path);
    return SpectralField::from_samples(grid, m, samples);
}

}  // namespace qnslab
