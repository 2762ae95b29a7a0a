"""Spectral model of the group of real-analytic circle diffeomorphisms."""
