#ifndef VNQP_VNQP_HPP
#define VNQP_VNQP_HPP

#include "vnqp/bench.hpp"
#include "vnqp/bracketing.hpp"
#include "vnqp/cone.hpp"
#include "vnqp/error.hpp"
#include "vnqp/feasibility.hpp"
#include "vnqp/instance.hpp"
#include "vnqp/linalg.hpp"
#include "vnqp/matrix_io.hpp"
#include "vnqp/min_norm.hpp"
#include "vnqp/planar.hpp"
#include "vnqp/planar_solver.hpp"
#include "vnqp/qr_update.hpp"
#include "vnqp/separation.hpp"

#endif  // VNQP_VNQP_HPP
