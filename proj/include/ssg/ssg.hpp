#ifndef SSG_SSG_HPP
#define SSG_SSG_HPP

#include "energy.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "harmonicity.hpp"
#include "kusuoka.hpp"
#include "laplacian.hpp"
#include "linalg.hpp"
#include "params.hpp"
#include "parser.hpp"
#include "poly.hpp"
#include "quadrature.hpp"
#include "summation.hpp"

#endif // SSG_SSG_HPP
