#pragma once

#include <gtest/gtest.h>

#include "congsub/error.hpp"

// Passes when `stmt` throws congsub::Error of the given kind.
#define EXPECT_ERROR_KIND(stmt, expected)                         \
  EXPECT_THROW(                                                   \
      {                                                           \
        try {                                                     \
          stmt;                                                   \
        } catch (const congsub::Error& err_) {                    \
          EXPECT_EQ(err_.kind(), expected) << err_.what();        \
          throw;                                                  \
        }                                                         \
      },                                                          \
      congsub::Error)
