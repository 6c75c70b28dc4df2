#ifndef BLAZ_BLAZ_HPP
#define BLAZ_BLAZ_HPP

#include "blaz/bench.hpp"
#include "blaz/block.hpp"
#include "blaz/block_ops.hpp"
#include "blaz/codec.hpp"
#include "blaz/dct.hpp"
#include "blaz/io.hpp"
#include "blaz/matrix.hpp"

#endif  // BLAZ_BLAZ_HPP
