"""Carriers, injections, chains and the bijective witness."""
