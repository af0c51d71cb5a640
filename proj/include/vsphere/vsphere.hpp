#pragma once

#include "vsphere/params.hpp"
#include "vsphere/geometry.hpp"
#include "vsphere/energy_shell.hpp"
#include "vsphere/charts.hpp"
#include "vsphere/dynamics.hpp"
#include "vsphere/integrator.hpp"
#include "vsphere/energy.hpp"
#include "vsphere/equilibria.hpp"
#include "vsphere/orbits.hpp"
#include "vsphere/diagnostics.hpp"
#include "vsphere/io.hpp"
