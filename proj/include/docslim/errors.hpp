// Copyright (c) 2026 The docslim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace docslim {

/// Base class for every error thrown by docslim.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raster is smaller than the 3x3 support an operation needs.
class ImageTooSmall : public Error {
 public:
  using Error::Error;
};

/// Two inputs (or an input and a declared shape) disagree in dimensions.
class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

/// A removal would leave zero rows or zero columns.
class EmptyResult : public Error {
 public:
  using Error::Error;
};

/// Fewer tokens than the operation can cluster.
class TooFewTokens : public Error {
 public:
  using Error::Error;
};

/// A token row has zero Euclidean norm, cosine similarity is undefined.
class ZeroNormToken : public Error {
 public:
  using Error::Error;
};

/// A resize would produce a zero-sized dimension.
class DegenerateOutput : public Error {
 public:
  using Error::Error;
};

/// A synthetic spec contradicts itself (e.g. blank band through a text rect).
class SpecConflict : public Error {
 public:
  using Error::Error;
};

/// Embedding dimension too small for the requested orthogonal content set.
class DimTooSmall : public Error {
 public:
  using Error::Error;
};

/// Filesystem or codec failure (missing file, undecodable PNG, ...).
class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed token file: bad magic, bad shape, truncated payload.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace docslim
