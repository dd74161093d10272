#pragma once

#include "seamweld/flow.hpp"
#include "seamweld/image.hpp"
#include "seamweld/quality.hpp"

namespace seamweld::reference {

/// Serial counterparts of the parallel kernels. They share the per-element
/// arithmetic with the main implementations and must produce bit-identical
/// results; tests assert that and the benchmark compares their speed.

DescriptorField dense_descriptors(const Image& gray);

FlowField estimate_flow(const Image& target, const Image& reference,
                        const FlowParams& params = {});

SeamScore evaluate_seam(const AlignedPair& pair, const Seam& seam,
                        const ValidityMask& overlap, int window = 21);

} // namespace seamweld::reference
