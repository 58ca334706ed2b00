"""Dense complex-matrix kernel."""
