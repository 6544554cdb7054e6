#pragma once

#include <string>
#include <vector>

#include "exprclone/image.hpp"

namespace exprclone {

// PCA basis over grayscale face images: mean vector plus orthonormal
// principal components with descending eigenvalues (sample covariance,
// normalized by sample_count - 1).
struct EigenBasis {
    int width = 0;
    int height = 0;
    std::vector<double> mean;
    std::vector<std::vector<double>> components;
    std::vector<double> eigenvalues;

    size_t dim() const { return static_cast<size_t>(width) * height; }
};

// Cyclic Jacobi eigendecomposition of a symmetric n x n matrix (row-major).
// Eigenpairs come back sorted by descending eigenvalue; eigenvectors are the
// rows of `vectors`. Convergence: off-diagonal Frobenius norm below 1e-12
// relative to the initial Frobenius norm, at most 100 sweeps.
void symmetric_eigen_jacobi(std::vector<double> matrix, int n, std::vector<double>& values,
                            std::vector<double>& vectors);

// Trains the basis with the Gram-matrix method (sample_count x sample_count
// eigenproblem). Components with eigenvalue below 1e-10 of the largest are
// dropped; each component's largest-magnitude entry is made non-negative.
EigenBasis train_basis(const std::vector<RasterImage>& images, int k);

// k defaults to sample_count - 1.
EigenBasis train_basis(const std::vector<RasterImage>& images);

// Loads every .pgm/.ppm in the directory (sorted by filename) and trains.
EigenBasis train_basis_from_dir(const std::string& dir, int k = -1);

// Projection coefficients of the mean-centered grayscale image onto the
// components.
std::vector<double> project(const EigenBasis& basis, const RasterImage& img);

// Versioned binary sidecar (magic EIGB1, little-endian).
void save_basis(const std::string& path, const EigenBasis& basis);
EigenBasis load_basis(const std::string& path);

} // namespace exprclone
