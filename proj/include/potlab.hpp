#pragma once

#include "potlab/common.hpp"
#include "potlab/grid.hpp"
#include "potlab/field.hpp"
#include "potlab/fft.hpp"
#include "potlab/special_functions.hpp"
#include "potlab/sphere.hpp"
#include "potlab/profiles.hpp"
#include "potlab/recipe.hpp"
#include "potlab/spectral.hpp"
#include "potlab/kernels.hpp"
#include "potlab/potential.hpp"
#include "potlab/kernel_forms.hpp"
#include "potlab/weighted.hpp"
#include "potlab/flux.hpp"
#include "potlab/lab/report.hpp"
#include "potlab/lab/theorem1.hpp"
#include "potlab/lab/theorem2.hpp"
#include "potlab/lab/theorem3.hpp"
#include "potlab/lab/theorem4.hpp"
#include "potlab/lab/cases.hpp"
#include "potlab/cli/config.hpp"
#include "potlab/cli/runner.hpp"
