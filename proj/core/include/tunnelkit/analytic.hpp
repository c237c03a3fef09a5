#pragma once

#include <complex>

#include "tunnelkit/domain.hpp"

namespace tunnelkit {

using Complex = std::complex<double>;

// Transmission coefficient t(omega) or t(E).
struct ComplexAmplitude {
    double re = 0.0;
    double im = 0.0;

    ComplexAmplitude() = default;
    ComplexAmplitude(double re_, double im_) : re(re_), im(im_) {}
    explicit ComplexAmplitude(Complex z) : re(z.real()), im(z.imag()) {}

    Complex value() const { return {re, im}; }
    double magnitude() const { return std::abs(value()); }
};

// Transmitted and reflected amplitudes computed together.
struct Scattering {
    Complex t;
    Complex r;

    // |t|^2 + |r|^2 for symmetric lossless structures.
    double power_sum() const { return std::norm(t) + std::norm(r); }
};

// Characteristic matrix of a layer sequence in normalized-admittance form:
// a single layer of index n and phase thickness d is [[cos d, i sin d / n], [i n sin d, cos d]].
struct TransferMatrix {
    Complex m11{1.0, 0.0};
    Complex m12{0.0, 0.0};
    Complex m21{0.0, 0.0};
    Complex m22{1.0, 0.0};

    static TransferMatrix identity() { return {}; }
    Complex determinant() const { return m11 * m22 - m12 * m21; }
    TransferMatrix operator*(const TransferMatrix& rhs) const;
};

// Amplitudes follow e^{i(kx - wt)} with the transmitted wave written t e^{ikx};
// for the slab models t = e^{-ikd} / D. Stack amplitudes use the characteristic
// matrix above, for which free propagation gives t = e^{-i n w L / c}.
Scattering rect_barrier_scattering(double energy_ev, const RectangularBarrier& barrier);
ComplexAmplitude rect_barrier_amplitude(double energy_ev, const RectangularBarrier& barrier);

TransferMatrix layer_matrix(double omega, const Layer& layer);
TransferMatrix stack_transfer_matrix(double omega, const DielectricStack& stack);
Scattering stack_scattering(double omega, const DielectricStack& stack);
ComplexAmplitude stack_amplitude(double omega, const DielectricStack& stack);

Scattering guide_scattering(double omega, const EvanescentGuide& guide);
ComplexAmplitude guide_amplitude(double omega, const EvanescentGuide& guide);

Scattering ftir_scattering(double omega, const FtirGap& gap);
ComplexAmplitude ftir_amplitude(double omega, const FtirGap& gap);

// Dispatch on the model; rectangular barriers interpret omega as E / hbar.
Scattering scattering(const BarrierModel& model, double omega);
ComplexAmplitude amplitude(const BarrierModel& model, double omega);

namespace detail {

// Symmetric slab of thickness d between two identical half-spaces.
// k: wavenumber outside; kappa_sq: squared decay constant inside (negative when
// the slab field propagates); impedance_ratio scales the inside decay constant
// in the boundary matching (1 for Schroedinger / TE, n^2 for TM at a prism).
Scattering slab_scattering(double k, double kappa_sq, double d, double impedance_ratio = 1.0);

}  // namespace detail

}  // namespace tunnelkit
