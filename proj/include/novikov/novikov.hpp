#pragma once

#include "novikov/field.hpp"
#include "novikov/spectral.hpp"
#include "novikov/grid.hpp"
#include "novikov/helmholtz.hpp"
#include "novikov/mollify.hpp"
#include "novikov/dynamics.hpp"
#include "novikov/stepper.hpp"
#include "novikov/diagnostics.hpp"
#include "novikov/exact.hpp"
#include "novikov/weakform.hpp"
#include "novikov/lab.hpp"
#include "novikov/io.hpp"
#include "novikov/config.hpp"
#include "novikov/commands.hpp"
