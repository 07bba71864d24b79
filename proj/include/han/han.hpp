#ifndef HAN_HAN_HPP
#define HAN_HAN_HPP

#include <han/cpqr.hpp>
#include <han/datasets.hpp>
#include <han/han_schemes.hpp>
#include <han/kernels.hpp>
#include <han/low_rank.hpp>
#include <han/matrix_source.hpp>
#include <han/norms.hpp>
#include <han/nystrom.hpp>
#include <han/residual.hpp>
#include <han/sampling.hpp>
#include <han/solve.hpp>
#include <han/srr.hpp>
#include <han/svd.hpp>
#include <han/types.hpp>

#endif  // HAN_HAN_HPP
