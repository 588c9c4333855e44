"""Scenario runners, conformal terms and script execution."""
