#pragma once

// Hard test objects: bump families, the separated inner-product expansion
// and the L1 counterexample.

#include <ridgekit/bumps.hpp>
#include <ridgekit/counterexample.hpp>
#include <ridgekit/expansion.hpp>
#include <ridgekit/jet.hpp>
#include <ridgekit/trig_reduce.hpp>
