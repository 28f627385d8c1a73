#ifndef QWALK_QWALK_HPP
#define QWALK_QWALK_HPP

#include "qwalk/classical.hpp"
#include "qwalk/closed_forms.hpp"
#include "qwalk/dynamics.hpp"
#include "qwalk/errors.hpp"
#include "qwalk/floquet.hpp"
#include "qwalk/format.hpp"
#include "qwalk/graph.hpp"
#include "qwalk/spectral.hpp"

#endif  // QWALK_QWALK_HPP
