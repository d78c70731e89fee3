#ifndef MLAB_MLAB_HPP
#define MLAB_MLAB_HPP

#include "asymptotics.hpp"
#include "cones.hpp"
#include "deligne.hpp"
#include "direct_images.hpp"
#include "filtration.hpp"
#include "io.hpp"
#include "linalg.hpp"
#include "logpoint.hpp"
#include "monodromy.hpp"
#include "ratios.hpp"
#include "scalar.hpp"

#endif  // MLAB_MLAB_HPP
