#pragma once

#include "kanset/abelian.hpp"
#include "kanset/constructors.hpp"
#include "kanset/eilenberg_maclane.hpp"
#include "kanset/errors.hpp"
#include "kanset/homology.hpp"
#include "kanset/homotopy_groups.hpp"
#include "kanset/io.hpp"
#include "kanset/kan.hpp"
#include "kanset/parallel.hpp"
#include "kanset/simplicial_set.hpp"
#include "kanset/spectral.hpp"
