#include "fop/chain.hpp"

namespace fop {

Chain::Chain(const BinaryImage& start, int scales, std::uint64_t seed)
    : pyramid_(start, scales), evaluator_(pyramid_.pyramid()), rng_(seed) {}

bool Chain::consistent() const { return pyramid() == build_pyramid(image(), scales()); }

}  // namespace fop
