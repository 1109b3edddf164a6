#pragma once

#include <gtest/gtest.h>

#include <functional>

#include "ouq/error.hpp"

// Kind of the ouq::Error thrown by fn, failing the test if none is thrown.
inline ouq::ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const ouq::Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an ouq::Error";
  return ouq::ErrorKind::NumericalFailure;
}
