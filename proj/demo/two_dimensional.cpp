// SPDX-License-Identifier: Apache-2.0
// Recovers five frequencies on the 2-torus from 11 x 11 noisy samples.

#include <cstdio>

#include "musicnd/core.hpp"
#include "musicnd/experiments/record.hpp"
#include "musicnd/hankel.hpp"
#include "musicnd/music.hpp"

int main()
{
    using namespace musicnd;
    const SamplingGrid grid({10, 10});
    const SpectralModel model = random_model(5, grid, 2.0, 3.0, 2024);
    const MeasurementArray y = synthesize(model, grid);
    const MeasurementArray ye = add_noise(y, nsr_to_sigma(0.05, y), NoiseKind::complex_gaussian, 7);

    const SubspaceDecomposition dec = decompose(build_hankel(ye, {5, 5}), 5);
    const SupportEstimate est = recover_support(dec);
    const AmplitudeEstimate amp = recover_amplitudes(ye, est.support);

    std::printf("singular values:");
    for (long j = 0; j < dec.singular_values().size(); ++j) std::printf(" %.3g", dec.singular_values()(j));
    std::printf("\n\n%-24s %-24s %s\n", "exact", "estimate", "amplitude");
    for (std::size_t j = 0; j < est.support.size(); ++j) {
        const TorusPoint& w = est.support[j];
        std::size_t nearest = 0;
        for (std::size_t i = 1; i < model.support.size(); ++i)
            if (wrapped_distance(model.support[i], w) < wrapped_distance(model.support[nearest], w)) nearest = i;
        const TorusPoint& e = model.support[nearest];
        std::printf("(%.5f, %.5f)     (%.5f, %.5f)     %.3f%+.3fi\n", e[0], e[1], w[0], w[1], amp.values[j].real(),
                    amp.values[j].imag());
    }
    std::printf("\nHausdorff error: %.4f RL\n", experiments::hausdorff_rl(model.support, est.support, grid.max_index()));
}
