#pragma once

#include <polydict/polymat.hpp>
#include <polydict/sparsecode.hpp>

namespace polydict {

/// Sparse-codes every column of the noisy matrix against `dict` and returns D(z) X.
inline PolyMatrix denoise(const PolyMatrix& noisy, const PolyMatrix& dict, const CodeConfig& cfg, Coder coder)
{
    return reconstruct(dict, code_matrix(noisy, dict, cfg, coder));
}

} // namespace polydict
