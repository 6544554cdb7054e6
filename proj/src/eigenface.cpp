#include "exprclone/eigenface.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numeric>

namespace exprclone {

void symmetric_eigen_jacobi(std::vector<double> a, int n, std::vector<double>& values,
                            std::vector<double>& vectors) {
    const size_t nn = static_cast<size_t>(n);
    std::vector<double> v(nn * nn, 0.0); // accumulated rotations, row i = eigenvector i
    for (size_t i = 0; i < nn; ++i) v[i * nn + i] = 1.0;

    double fro0 = 0.0;
    for (double x : a) fro0 += x * x;
    fro0 = std::sqrt(fro0);
    const double off_tol = 1e-12 * std::max(fro0, 1e-300);

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                off += 2.0 * a[static_cast<size_t>(p) * nn + q] * a[static_cast<size_t>(p) * nn + q];
            }
        }
        if (std::sqrt(off) <= off_tol) break;

        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = a[static_cast<size_t>(p) * nn + q];
                if (apq == 0.0) continue;
                const double app = a[static_cast<size_t>(p) * nn + p];
                const double aqq = a[static_cast<size_t>(q) * nn + q];
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                for (int k = 0; k < n; ++k) {
                    const double akp = a[static_cast<size_t>(k) * nn + p];
                    const double akq = a[static_cast<size_t>(k) * nn + q];
                    a[static_cast<size_t>(k) * nn + p] = c * akp - s * akq;
                    a[static_cast<size_t>(k) * nn + q] = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = a[static_cast<size_t>(p) * nn + k];
                    const double aqk = a[static_cast<size_t>(q) * nn + k];
                    a[static_cast<size_t>(p) * nn + k] = c * apk - s * aqk;
                    a[static_cast<size_t>(q) * nn + k] = s * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    const double vpk = v[static_cast<size_t>(p) * nn + k];
                    const double vqk = v[static_cast<size_t>(q) * nn + k];
                    v[static_cast<size_t>(p) * nn + k] = c * vpk - s * vqk;
                    v[static_cast<size_t>(q) * nn + k] = s * vpk + c * vqk;
                }
            }
        }
    }

    std::vector<int> idx(nn);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int i, int j) {
        return a[static_cast<size_t>(i) * nn + i] > a[static_cast<size_t>(j) * nn + j];
    });
    values.resize(nn);
    vectors.assign(nn * nn, 0.0);
    for (size_t r = 0; r < nn; ++r) {
        const size_t src = static_cast<size_t>(idx[r]);
        values[r] = a[src * nn + src];
        for (size_t k = 0; k < nn; ++k) vectors[r * nn + k] = v[src * nn + k];
    }
}

namespace {

std::vector<double> flatten_gray(const RasterImage& img) {
    const RasterImage gray = to_gray(img);
    return gray.samples;
}

void fix_component_sign(std::vector<double>& comp) {
    size_t max_idx = 0;
    double max_mag = -1.0;
    for (size_t i = 0; i < comp.size(); ++i) {
        const double mag = std::abs(comp[i]);
        if (mag > max_mag) {
            max_mag = mag;
            max_idx = i;
        }
    }
    if (comp[max_idx] < 0.0) {
        for (double& x : comp) x = -x;
    }
}

} // namespace

EigenBasis train_basis(const std::vector<RasterImage>& images, int k) {
    const int m = static_cast<int>(images.size());
    if (m < 2) throw TrainingError("train_basis: needs at least 2 images");
    if (k < 1) throw TrainingError("train_basis: component count must be >= 1");
    const int width = images[0].width;
    const int height = images[0].height;
    for (const RasterImage& img : images) {
        if (img.width != width || img.height != height) {
            throw ImageError("train_basis: images differ in dimensions");
        }
    }
    const size_t d = static_cast<size_t>(width) * height;

    std::vector<std::vector<double>> x(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) x[static_cast<size_t>(i)] = flatten_gray(images[static_cast<size_t>(i)]);

    EigenBasis basis;
    basis.width = width;
    basis.height = height;
    basis.mean.assign(d, 0.0);
    for (int i = 0; i < m; ++i) {
        for (size_t j = 0; j < d; ++j) basis.mean[j] += x[static_cast<size_t>(i)][j];
    }
    for (size_t j = 0; j < d; ++j) basis.mean[j] /= m;
    for (int i = 0; i < m; ++i) {
        for (size_t j = 0; j < d; ++j) x[static_cast<size_t>(i)][j] -= basis.mean[j];
    }

    // Gram matrix: m x m instead of d x d
    std::vector<double> gram(static_cast<size_t>(m) * m);
    for (int i = 0; i < m; ++i) {
        for (int j = i; j < m; ++j) {
            double s = 0.0;
            for (size_t p = 0; p < d; ++p) s += x[static_cast<size_t>(i)][p] * x[static_cast<size_t>(j)][p];
            gram[static_cast<size_t>(i) * m + j] = s;
            gram[static_cast<size_t>(j) * m + i] = s;
        }
    }
    double total_var = 0.0;
    for (int i = 0; i < m; ++i) total_var += gram[static_cast<size_t>(i) * m + i];
    if (total_var <= 1e-12) {
        throw TrainingError("train_basis: degenerate training set (all images identical)");
    }

    std::vector<double> gram_values;
    std::vector<double> gram_vectors;
    symmetric_eigen_jacobi(gram, m, gram_values, gram_vectors);

    const double max_val = std::max(gram_values[0], 0.0);
    const int keep_limit = std::min(k, m);
    for (int r = 0; r < keep_limit; ++r) {
        const double val = gram_values[static_cast<size_t>(r)];
        if (val < 1e-10 * max_val || val <= 0.0) break;
        std::vector<double> comp(d, 0.0);
        for (int i = 0; i < m; ++i) {
            const double w = gram_vectors[static_cast<size_t>(r) * m + i];
            for (size_t p = 0; p < d; ++p) comp[p] += w * x[static_cast<size_t>(i)][p];
        }
        double nrm = 0.0;
        for (double c : comp) nrm += c * c;
        nrm = std::sqrt(nrm);
        for (double& c : comp) c /= nrm;
        fix_component_sign(comp);
        basis.components.push_back(std::move(comp));
        basis.eigenvalues.push_back(val / (m - 1));
    }
    if (basis.components.empty()) {
        throw TrainingError("train_basis: no usable principal components");
    }
    return basis;
}

EigenBasis train_basis(const std::vector<RasterImage>& images) {
    const int m = static_cast<int>(images.size());
    if (m < 2) throw TrainingError("train_basis: needs at least 2 images");
    return train_basis(images, m - 1);
}

EigenBasis train_basis_from_dir(const std::string& dir, int k) {
    namespace fs = std::filesystem;
    std::vector<std::string> paths;
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(dir, ec)) {
        if (!entry.is_regular_file()) continue;
        const std::string ext = entry.path().extension().string();
        if (ext == ".pgm" || ext == ".ppm") paths.push_back(entry.path().string());
    }
    if (ec) throw TrainingError("train_basis_from_dir: cannot read directory " + dir);
    std::sort(paths.begin(), paths.end());
    if (paths.size() < 2) {
        throw TrainingError("train_basis_from_dir: fewer than 2 training images in " + dir);
    }
    std::vector<RasterImage> images;
    images.reserve(paths.size());
    for (const std::string& p : paths) images.push_back(read_image(p));
    if (k < 0) return train_basis(images);
    return train_basis(images, k);
}

std::vector<double> project(const EigenBasis& basis, const RasterImage& img) {
    if (img.width != basis.width || img.height != basis.height) {
        throw ImageError("project: image dimensions do not match the trained basis");
    }
    const std::vector<double> g = flatten_gray(img);
    const size_t d = basis.dim();
    std::vector<double> centered(d);
    for (size_t i = 0; i < d; ++i) centered[i] = g[i] - basis.mean[i];
    std::vector<double> coeffs(basis.components.size());
    for (size_t r = 0; r < basis.components.size(); ++r) {
        double s = 0.0;
        const std::vector<double>& comp = basis.components[r];
        for (size_t i = 0; i < d; ++i) s += comp[i] * centered[i];
        coeffs[r] = s;
    }
    return coeffs;
}

namespace {

constexpr char kBasisMagic[5] = {'E', 'I', 'G', 'B', '1'};

template <typename T>
void write_pod(std::ofstream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::ifstream& in, const std::string& path) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw ParseError("basis file truncated: " + path);
    return v;
}

} // namespace

void save_basis(const std::string& path, const EigenBasis& basis) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write basis file: " + path);
    out.write(kBasisMagic, sizeof(kBasisMagic));
    write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(basis.width));
    write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(basis.height));
    write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(basis.components.size()));
    out.write(reinterpret_cast<const char*>(basis.mean.data()),
              static_cast<std::streamsize>(basis.mean.size() * sizeof(double)));
    for (const auto& comp : basis.components) {
        out.write(reinterpret_cast<const char*>(comp.data()),
                  static_cast<std::streamsize>(comp.size() * sizeof(double)));
    }
    out.write(reinterpret_cast<const char*>(basis.eigenvalues.data()),
              static_cast<std::streamsize>(basis.eigenvalues.size() * sizeof(double)));
    if (!out) throw ParseError("short write on basis file: " + path);
}

EigenBasis load_basis(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open basis file: " + path);
    char magic[5];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kBasisMagic, sizeof(magic)) != 0) {
        throw ParseError("not an EIGB1 basis file: " + path);
    }
    EigenBasis basis;
    basis.width = static_cast<int>(read_pod<std::uint32_t>(in, path));
    basis.height = static_cast<int>(read_pod<std::uint32_t>(in, path));
    const auto k = read_pod<std::uint32_t>(in, path);
    if (basis.width < 1 || basis.height < 1 || k < 1 || basis.dim() > (1u << 28)) {
        throw ParseError("implausible basis header: " + path);
    }
    const size_t d = basis.dim();
    basis.mean.resize(d);
    in.read(reinterpret_cast<char*>(basis.mean.data()),
            static_cast<std::streamsize>(d * sizeof(double)));
    basis.components.resize(k);
    for (auto& comp : basis.components) {
        comp.resize(d);
        in.read(reinterpret_cast<char*>(comp.data()),
                static_cast<std::streamsize>(d * sizeof(double)));
    }
    basis.eigenvalues.resize(k);
    in.read(reinterpret_cast<char*>(basis.eigenvalues.data()),
            static_cast<std::streamsize>(k * sizeof(double)));
    if (!in) throw ParseError("basis file truncated: " + path);
    return basis;
}

} // namespace exprclone
