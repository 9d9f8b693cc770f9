"""Test suite for slicexp"""
