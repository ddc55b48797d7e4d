// report serialization lives here; filled in with the io module
